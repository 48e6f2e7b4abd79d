#ifndef RESLAB_MULTIINDEX_HPP
#define RESLAB_MULTIINDEX_HPP

#include <functional>
#include <vector>

#include "reslab/rational.hpp"

namespace reslab {

// k = (k_1, ..., k_s) with nonnegative entries.
struct MultiIndex {
  std::vector<int> k;

  MultiIndex() = default;
  explicit MultiIndex(std::vector<int> entries) : k(std::move(entries)) {}

  int slots() const { return static_cast<int>(k.size()); }

  int total() const {  // |k|
    int t = 0;
    for (int v : k) t += v;
    return t;
  }

  Rational factorial_prod() const {  // k!
    Rational f(1);
    for (int v : k) f *= factorial(v);
    return f;
  }

  // K_j = k_1 + ... + k_j  (1-based j)
  int partial(int j) const {
    int t = 0;
    for (int i = 0; i < j; ++i) t += k[i];
    return t;
  }
};

// Exact simplex integral of prod_j v_j^{k_j} over 0 <= v_1 <= ... <= v_s <= 1
// next to the closed form the paper prints for it.  The two agree whenever
// s = 1; for s >= 2 they differ (value_paper is 1 at k = (0,0), the exact
// volume is 1/2).
struct SimplexConstant {
  MultiIndex k;
  Rational value_exact;
  Rational value_paper;
};

inline SimplexConstant simplex_constant(const MultiIndex& k) {
  SimplexConstant out;
  out.k = k;
  out.value_exact = Rational(1);
  for (int j = 1; j <= k.slots(); ++j)
    out.value_exact /= Rational(k.partial(j) + j);
  out.value_paper = Rational(1);
  for (int v : k.k) out.value_paper /= Rational(v + 1);  // k!/(k+1)!
  return out;
}

// Which constant feeds the heat-expansion coefficient D(k).
enum class CoefficientConvention { kExact, kPaper };

inline const char* convention_name(CoefficientConvention c) {
  return c == CoefficientConvention::kExact ? "exact" : "paper";
}

// D(k): the coefficient of (-t)^{|k|} tr(A_0 A_1^{(k_1)} ... e^{-tQ}) in the
// expansion of the heat cochain.  kExact uses the exact simplex integral
// divided by k!, kPaper uses the printed 1/(k+1)!.
inline Rational expansion_coefficient(const MultiIndex& k,
                                      CoefficientConvention conv) {
  SimplexConstant c = simplex_constant(k);
  const Rational& ck = (conv == CoefficientConvention::kPaper)
                           ? c.value_paper   // k!/(k+1)!  ->  D = 1/(k+1)!
                           : c.value_exact;  // exact simplex integral
  return ck / k.factorial_prod();
}

// Coefficient entering the residue (Mellin finite-part) formulas.  Those
// formulas anchor the finite part at 1 * tr^Q, i.e. at a k = 0 coefficient
// of 1, while the exact heat expansion opens with the simplex volume
// 1/(anchor)!.  The exact constants therefore enter renormalized by that
// volume; the printed k!/(k+1)! convention carries the anchor already.
// Consistency (cyclicity of the finite part, the coboundary identity) fails
// for any other pairing; the anomaly tests check this exactly.
inline Rational anomaly_coefficient(const MultiIndex& k, int anchor,
                                    CoefficientConvention conv) {
  if (conv == CoefficientConvention::kPaper)
    return expansion_coefficient(k, conv);
  return factorial(anchor) * expansion_coefficient(k, conv);
}

// Visit every multiindex with `slots` entries and |k| == total.
inline void for_each_multiindex(int slots, int total,
                                const std::function<void(const MultiIndex&)>& f) {
  if (slots == 0) {
    if (total == 0) f(MultiIndex{});
    return;
  }
  std::vector<int> k(slots, 0);
  std::function<void(int, int)> rec = [&](int pos, int rest) {
    if (pos == slots - 1) {
      k[pos] = rest;
      f(MultiIndex{k});
      return;
    }
    for (int v = 0; v <= rest; ++v) {
      k[pos] = v;
      rec(pos + 1, rest - v);
    }
  };
  rec(0, total);
}

}  // namespace reslab

#endif
