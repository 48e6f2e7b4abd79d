#ifndef RESLAB_SPECTRAL_HPP
#define RESLAB_SPECTRAL_HPP

#include <vector>

#include "reslab/rational_func.hpp"
#include "reslab/symbol.hpp"
#include "reslab/weight.hpp"

namespace reslab {

// Small dense matrix of Gaussian rationals (one operator block).
struct CMat {
  int r = 1;
  std::vector<CRational> e;

  CMat() : r(1), e(1) {}
  explicit CMat(int rank) : r(rank), e(static_cast<size_t>(rank) * rank) {}

  static CMat identity(int rank) {
    CMat m(rank);
    for (int i = 0; i < rank; ++i) m.at(i, i) = CRational(1);
    return m;
  }

  CRational& at(int i, int j) { return e[static_cast<size_t>(i) * r + j]; }
  const CRational& at(int i, int j) const {
    return e[static_cast<size_t>(i) * r + j];
  }

  bool is_zero() const {
    for (const auto& v : e)
      if (!v.is_zero()) return false;
    return true;
  }

  CRational trace() const {
    CRational t;
    for (int i = 0; i < r; ++i) t += at(i, i);
    return t;
  }

  friend CMat operator+(const CMat& a, const CMat& b) {
    CMat out(a.r);
    for (size_t i = 0; i < a.e.size(); ++i) out.e[i] = a.e[i] + b.e[i];
    return out;
  }
  friend CMat operator*(const CMat& a, const CMat& b) {
    CMat out(a.r);
    for (int i = 0; i < a.r; ++i)
      for (int k = 0; k < a.r; ++k) {
        if (a.at(i, k).is_zero()) continue;
        for (int j = 0; j < a.r; ++j)
          out.at(i, j) += a.at(i, k) * b.at(k, j);
      }
    return out;
  }
  friend CMat operator*(const CMat& a, const CRational& s) {
    CMat out(a.r);
    for (size_t i = 0; i < a.e.size(); ++i) out.e[i] = a.e[i] * s;
    return out;
  }
};

// Exact operator on the Fourier basis of the circle: banded, materialized on
// the square |m|, |n| <= radius, with per-branch exact rational tail rules
// that reproduce the entries for any column beyond `crossover`.  The tail
// rules are functions of the column index n (plus branch) or |n| (minus
// branch) at fixed band offset m - n.
class SpectralOperator {
 public:
  SpectralOperator(int rank, long radius, long bandwidth, long crossover);

  int rank() const { return rank_; }
  long radius() const { return radius_; }
  long bandwidth() const { return bandwidth_; }
  long crossover() const { return crossover_; }

  // Exact entry block at any indices; falls back to the tail rules beyond
  // the materialized square.
  CMat entry(long m, long n) const;

  CMat& block(long n, long delta);
  const CMat& block(long n, long delta) const;

  CRatFunc& tail(bool plus, long delta, int i, int j);
  const CRatFunc& tail(bool plus, long delta, int i, int j) const;

  // Diagonal tail as a single rational-function trace, per branch.
  CRatFunc diagonal_tail_trace(bool plus) const;

  friend SpectralOperator multiply(const SpectralOperator& a,
                                   const SpectralOperator& b);
  friend SpectralOperator add(const SpectralOperator& a,
                              const SpectralOperator& b);

 private:
  int rank_;
  long radius_;
  long bandwidth_;
  long crossover_;
  std::vector<CMat> blocks_;                // (2R+1) x (2W+1)
  std::vector<CRatFunc> tail_plus_, tail_minus_;  // (2W+1) x r x r
  size_t tail_index(long delta, int i, int j) const;
};

// Toroidal quantization (Op(a)u)(x) = sum_n a(x, n) u_n e^{inx}: entries
// A_{mn} are the (m-n)-th Fourier coefficients of a(., n).  Negative-degree
// components evaluate to zero at n = 0; the degree-0 component uses its plus
// branch there.  Requires an exact symbol.
SpectralOperator quantize(const ClassicalSymbol& a, long radius);

SpectralOperator identity_operator(int rank, long radius);

// diag(lambda(n)^power), exact for every n (lambda > 0), with rational tail.
SpectralOperator diagonal_law_power(const EigenvalueLaw& law, int power,
                                    long radius, int rank = 1);

// Single diagonal entry at n = n0 (trace-class fixture).
SpectralOperator rank_one_diag(long n0, const CRational& value, long radius,
                               int rank = 1);

// Single off-diagonal entry at (m0, n0) (two-level fixtures).
SpectralOperator single_entry(long m0, long n0, const CRational& value,
                              long radius, int rank = 1);

// [diag(lambda), A], exact.
SpectralOperator law_commutator(const EigenvalueLaw& law,
                                const SpectralOperator& a);

SpectralOperator scale(const SpectralOperator& a, const CRational& s);
SpectralOperator subtract(const SpectralOperator& a, const SpectralOperator& b);

}  // namespace reslab

#endif
