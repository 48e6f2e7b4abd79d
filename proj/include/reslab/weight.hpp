#ifndef RESLAB_WEIGHT_HPP
#define RESLAB_WEIGHT_HPP

#include <optional>
#include <utility>
#include <vector>

#include "reslab/symbol.hpp"

namespace reslab {

// Diagonal spectral model lambda(n) = sum_i p_i |n|^i with p_q > 0 and
// lambda(n) > 0 for every integer n.
struct EigenvalueLaw {
  std::vector<Rational> p;  // p[0..q]

  int order() const { return static_cast<int>(p.size()) - 1; }

  Rational lambda(long n) const {
    long s = n < 0 ? -n : n;
    Rational acc(0);
    Rational pw(1);
    for (const Rational& pi : p) {
      acc += pi * pw;
      pw *= s;
    }
    return acc;
  }

  void validate() const;

  // Symbol sum_i p_i |xi|^i (plus == minus branch).
  ClassicalSymbol to_symbol(int rank) const;

  friend EigenvalueLaw operator+(const EigenvalueLaw& a,
                                 const EigenvalueLaw& b);
  friend EigenvalueLaw operator*(const EigenvalueLaw& a, const Rational& s);
};

// Elliptic symbol of positive integer order q with positive scalar leading
// term (a positive rational constant times the identity on each branch).
struct Weight {
  ClassicalSymbol symbol;
  int q = 0;
  std::optional<EigenvalueLaw> law;

  static Weight from_symbol(ClassicalSymbol sym, int order,
                            std::optional<EigenvalueLaw> law = std::nullopt);
  static Weight from_law(const EigenvalueLaw& law, int rank = 1);

  // Leading coefficients (plus branch, minus branch).
  std::pair<Rational, Rational> leading() const;
};

// The default testbed weight Q = 1 - Laplacian, lambda(n) = 1 + n^2.
Weight default_weight(int rank = 1);

// Parametrix recursion for Q^{-1}; compose(Q.symbol, result) equals the
// identity on all degrees above `floor`.
ClassicalSymbol inverse(const Weight& Q, int floor);

// Q^{-k}, order -k*q.
ClassicalSymbol power_neg(const Weight& Q, int k, int floor);

// A^{(j)} = ad_Q^j(A); order bound ord(A) + j*(q-1) since the leading term
// of Q is scalar.
ClassicalSymbol ad_power(const Weight& Q, const ClassicalSymbol& a, int j,
                         int floor);

}  // namespace reslab

#endif
