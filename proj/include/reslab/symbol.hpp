#ifndef RESLAB_SYMBOL_HPP
#define RESLAB_SYMBOL_HPP

#include <map>
#include <optional>
#include <vector>

#include "reslab/fourier_poly.hpp"

namespace reslab {

// Degrees below this sentinel are treated as -infinity (exact symbols track
// every degree; ZERO has no degrees at all).
constexpr int kNegInfDeg = INT_MIN / 4;

inline bool deg_is_neg_inf(int d) { return d <= kNegInfDeg / 2; }

inline int deg_add(int a, int b) {
  return (deg_is_neg_inf(a) || deg_is_neg_inf(b)) ? kNegInfDeg : a + b;
}

constexpr int kDimM = 1;  // the circle testbed

// One positively homogeneous component of a classical symbol on S^1:
//   value on xi > 0 :  plus(x)  * xi^degree
//   value on xi < 0 :  minus(x) * |xi|^degree
// d/dxi maps (plus, minus) at degree d to (d*plus, -d*minus) at degree d-1
// (the sign on the minus branch comes from |xi| = -xi there).
struct HomTerm {
  int degree = 0;
  FpMatrix plus;
  FpMatrix minus;

  HomTerm() = default;
  HomTerm(int d, FpMatrix p, FpMatrix m)
      : degree(d), plus(std::move(p)), minus(std::move(m)) {}

  bool is_zero() const { return plus.is_zero() && minus.is_zero(); }
  long support_bound() const {
    return std::max(plus.support_bound(), minus.support_bound());
  }
};

// Truncated polyhomogeneous symbol: finitely many homogeneous components at
// integer degrees in (valid_down_to, order]; degrees at or below
// valid_down_to are unknown (untracked), degrees above it with no stored
// term are exactly zero.  valid_down_to == kNegInfDeg means the symbol is
// exact: *all* unstored degrees vanish.
class ClassicalSymbol {
 public:
  ClassicalSymbol() : rank_(1), vdt_(kNegInfDeg) {}
  explicit ClassicalSymbol(int rank) : rank_(rank), vdt_(kNegInfDeg) {}

  static ClassicalSymbol zero(int rank) { return ClassicalSymbol(rank); }

  static ClassicalSymbol identity(int rank) {
    ClassicalSymbol s(rank);
    s.set_term(HomTerm(0, FpMatrix::identity(rank), FpMatrix::identity(rank)));
    return s;
  }

  int rank() const { return rank_; }

  bool is_zero() const { return terms_.empty() && vdt_ == kNegInfDeg; }

  // Largest degree that can carry a nonzero component.  For a truncated
  // symbol whose known degrees all vanish this is the validity floor.
  int order_bound() const {
    if (!terms_.empty()) return terms_.begin()->first;
    return vdt_;  // kNegInfDeg for ZERO
  }

  int valid_down_to() const { return vdt_; }
  void set_valid_down_to(int v) { vdt_ = v; }

  bool has_term(int degree) const { return terms_.count(degree) != 0; }

  const HomTerm* term(int degree) const {
    auto it = terms_.find(degree);
    return it == terms_.end() ? nullptr : &it->second;
  }

  void set_term(HomTerm t) {
    if (t.is_zero())
      terms_.erase(t.degree);
    else
      terms_[t.degree] = std::move(t);
  }

  // Descending degree order.
  const std::map<int, HomTerm, std::greater<int>>& terms() const {
    return terms_;
  }

  long support_bound() const {
    long b = 0;
    for (const auto& [d, t] : terms_) b = std::max(b, t.support_bound());
    return b;
  }

  friend bool operator==(const ClassicalSymbol& a, const ClassicalSymbol& b);

 private:
  int rank_;
  int vdt_;
  std::map<int, HomTerm, std::greater<int>> terms_;
};

bool symbol_terms_equal(const ClassicalSymbol& a, const ClassicalSymbol& b,
                        int above_floor);

ClassicalSymbol add(const ClassicalSymbol& a, const ClassicalSymbol& b);
ClassicalSymbol sub(const ClassicalSymbol& a, const ClassicalSymbol& b);
ClassicalSymbol scale(const ClassicalSymbol& a, const CRational& s);

// Drop degrees <= floor and mark them untracked.
ClassicalSymbol truncate(const ClassicalSymbol& a, int floor);

// d/dxi, degree drops by one on every component.
ClassicalSymbol derivative_xi(const ClassicalSymbol& a);
// D_x = -i d/dx applied to every coefficient.
ClassicalSymbol derivative_x_symbol(const ClassicalSymbol& a);

// Symbol of the operator product, by the homogeneous expansion of
//   c ~ sum_alpha (1/alpha!) dxi^alpha(a) * Dx^alpha(b),
// materialized on degrees above `floor`.  The certified floor is computed
// from the operands' floors and orders; FloorUnreachable if it sits above
// the request.  When the expansion terminates (polynomial left factor or
// x-independent right factor, pairwise) the result is exact.
ClassicalSymbol compose(const ClassicalSymbol& a, const ClassicalSymbol& b,
                        int floor);

// res(A) on the circle: the x-mean of tr(plus + minus) at degree -1.
// Zero when the order is below -1; InsufficientDepth when degree -1 is not
// certified.
CRational wodzicki_residue(const ClassicalSymbol& a);

// Convenience builders for scalar (rank 1) fixtures.
ClassicalSymbol sym_monomial(int degree, long freq, const CRational& plus,
                             const CRational& minus);
// xi^d as an odd/even homogeneous function: plus = 1, minus = (-1)^d.
ClassicalSymbol sym_xi_power(int degree);
// |xi|^d: plus = minus = 1.
ClassicalSymbol sym_abs_xi_power(int degree);

}  // namespace reslab

#endif
