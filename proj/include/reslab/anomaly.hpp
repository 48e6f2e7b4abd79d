#ifndef RESLAB_ANOMALY_HPP
#define RESLAB_ANOMALY_HPP

#include <complex>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "reslab/deep_symbol.hpp"
#include "reslab/multiindex.hpp"
#include "reslab/weight.hpp"

namespace reslab {

// Value of a cochain evaluation.  exact_part is set when the quantity is a
// pure residue sum, in which case value is its float image and err covers
// only non-symbolic contributions (zero for pure sums).
struct CochainValue {
  std::complex<double> value{0.0, 0.0};
  double err = 0.0;
  std::optional<CRational> exact_part;

  static CochainValue exact(const CRational& r) {
    return {r.to_complex(), 0.0, r};
  }

  friend CochainValue operator+(const CochainValue& a, const CochainValue& b) {
    CochainValue out;
    out.value = a.value + b.value;
    out.err = a.err + b.err;
    if (a.exact_part && b.exact_part)
      out.exact_part = *a.exact_part + *b.exact_part;
    return out;
  }
  friend CochainValue operator-(const CochainValue& a) {
    CochainValue out;
    out.value = -a.value;
    out.err = a.err;
    if (a.exact_part) out.exact_part = -*a.exact_part;
    return out;
  }
  friend CochainValue operator-(const CochainValue& a, const CochainValue& b) {
    return a + (-b);
  }
};

// One residue term of an anomaly formula, for audit output.
struct TermRecord {
  MultiIndex k;
  int j = -1;  // insertion slot, -1 when the formula has none
  Rational coeff;  // full prefactor including signs, factorials and 1/q
  CRational residue;
};
using TermTable = std::vector<TermRecord>;

// Finite part of the cochain minus tr^Q of the product:
//   (1/q) sum_{|k|=1}^{[|a|]+dim M} (-1)^{|k|} (|k|-1)! D(k)
//         res(A_0 A_1^{(k_1)} ... A_n^{(k_n)} Q^{-|k|}).
// Zero when n = 0 (no slots) or when the bound is below 1.  `extra_shells`
// extends the multiindex bound past the cutoff (every extra residue must be
// exactly zero; exercised by the cutoff tests).
CRational correction_sum(const Weight& Q,
                         std::span<const ClassicalSymbol> ops,
                         CoefficientConvention conv,
                         TermTable* table = nullptr, int extra_shells = 0);

// (1/q) res(A_0 A_1 ... A_n): the shared residue of every regularization.
CRational mellin_residue(const Weight& Q,
                         std::span<const ClassicalSymbol> ops);

// Hochschild coboundary of the even weighted trace cochain:
//   (1/q) sum_{|k|=0}^{[|a|]+dim M-1} (-1)^{|k|} |k|! D(k) sum_{j=0}^{p}
//     res(A_0 A_1^{(k_1)} ... A_{2j+1}^{(k_{2j+1}+1)} ... Q^{-|k|-1}).
// Takes 2p+2 arguments.
CRational coboundary_anomaly(const Weight& Q,
                             std::span<const ClassicalSymbol> ops,
                             CoefficientConvention conv,
                             TermTable* table = nullptr,
                             int extra_shells = 0);

// Supplies the finite part tr^Q of an operator product from its factor
// list; in practice the spectral oracle's weighted trace.
using TraceProvider = std::function<std::pair<std::complex<double>, double>(
    std::span<const ClassicalSymbol>)>;

// chi_n^Q(A_0..A_n) = tr^Q(A_0...A_n) + correction_sum.
CochainValue weighted_cochain(const Weight& Q,
                              std::span<const ClassicalSymbol> ops,
                              const TraceProvider& trace_provider,
                              CoefficientConvention conv);

// Same, but each argument of the cochain is itself a product of factors
// (needed when Hochschild combinations form arguments A_j A_{j+1}): the
// corrections use symbolic compositions of the groups, the trace provider
// receives the flattened factor list.
CochainValue weighted_cochain_grouped(
    const Weight& Q, std::span<const std::vector<ClassicalSymbol>> groups,
    const TraceProvider& trace_provider, CoefficientConvention conv);

// One-parameter affine family Q_t = base + t * direction on t_range; the
// optional eigen_direction keeps the diagonal spectral model in sync.
struct FamilySpec {
  Weight base;
  ClassicalSymbol direction;
  std::optional<EigenvalueLaw> eigen_direction;
  Rational t_lo{0};
  Rational t_hi{1};

  static FamilySpec make(Weight base, ClassicalSymbol direction,
                         std::optional<EigenvalueLaw> eigen_direction,
                         Rational t_lo = Rational(0),
                         Rational t_hi = Rational(1));
};

Weight weight_at(const FamilySpec& f, const Rational& t);

// d/dt chi_n^{Q_t}(A_0..A_n) as an exact residue sum:
//   (1/q) sum_{|k|=0}^{[|a|]+dim M} (-1)^{|k|+1} |k|! D(k) sum_{j=1}^{n+1}
//     res(A_0 A_1^{(k_1)} .. A_{j-1}^{(k_{j-1})} (dQ)^{(k_j)} A_j^{(k_{j+1})}
//         .. A_n^{(k_{n+1})} Q_t^{-|k|-1}).
CRational family_derivative(const FamilySpec& f, const Rational& t,
                            std::span<const ClassicalSymbol> ops,
                            CoefficientConvention conv,
                            TermTable* table = nullptr,
                            int extra_shells = 0);

// chi_n^{Q_1} - chi_n^{Q_0} = integral of the family derivative over [0,1],
// by Gauss-Legendre quadrature; err from node doubling.
CochainValue interpolation_difference(const FamilySpec& f,
                                      std::span<const ClassicalSymbol> ops,
                                      int nodes, CoefficientConvention conv);

// Gauss-Legendre nodes/weights on [0,1].
void gauss_legendre_01(int n, std::vector<double>& nodes,
                       std::vector<double>& weights);

// b chi_n(A_0..A_{n+1}) = sum_j (-1)^j chi_n(..., A_j A_{j+1}, ...)
//                        + (-1)^{n+1} chi_n(A_{n+1} A_0, ..., A_n).
// Works for any element type with a caller-supplied product, so the same
// combinator drives symbol-level cochains, spectral operators and plain
// numeric tables.
template <class T, class V, class ProductFn, class EvalFn>
V hochschild_b(EvalFn&& chi, std::span<const T> args, ProductFn&& prod) {
  const int n = static_cast<int>(args.size()) - 2;
  if (n < 0) throw Error("hochschild_b: needs at least two arguments");
  V acc{};
  for (int j = 0; j <= n; ++j) {
    std::vector<T> tuple;
    tuple.reserve(n + 1);
    for (int i = 0; i < j; ++i) tuple.push_back(args[i]);
    tuple.push_back(prod(args[j], args[j + 1]));
    for (int i = j + 2; i <= n + 1; ++i) tuple.push_back(args[i]);
    V v = chi(std::span<const T>(tuple));
    acc = (j % 2 == 0) ? acc + v : acc - v;
  }
  std::vector<T> wrap;
  wrap.reserve(n + 1);
  wrap.push_back(prod(args[n + 1], args[0]));
  for (int i = 1; i <= n; ++i) wrap.push_back(args[i]);
  V v = chi(std::span<const T>(wrap));
  acc = ((n + 1) % 2 == 0) ? acc + v : acc - v;
  return acc;
}

}  // namespace reslab

#endif
