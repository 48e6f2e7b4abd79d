#ifndef RESLAB_HEAT_HPP
#define RESLAB_HEAT_HPP

#include <complex>
#include <span>
#include <vector>

#include "reslab/multiindex.hpp"
#include "reslab/spectral.hpp"

namespace reslab {

struct ValueErr {
  std::complex<double> value{0.0, 0.0};
  double err = 0.0;

  friend ValueErr operator+(const ValueErr& a, const ValueErr& b) {
    return {a.value + b.value, a.err + b.err};
  }
  friend ValueErr operator-(const ValueErr& a, const ValueErr& b) {
    return {a.value - b.value, a.err + b.err};
  }
  friend ValueErr operator*(const ValueErr& a, double s) {
    return {a.value * s, a.err * std::abs(s)};
  }
};

// tr(C e^{-t Q}) for the diagonal spectral model; summation extends past the
// materialized radius through the exact tails until the heat decay kills it.
ValueErr heat_trace(const EigenvalueLaw& law, const SpectralOperator& c,
                    double t);

// Integral over the standard simplex of prod_j e^{-t u_j lambda_j}, i.e. the
// divided difference of exp over the nodes -t*lambda_j, computed as the
// corner entry of the exponential of the Opitz bidiagonal node matrix.
// Symmetric in the nodes, positive, equal to e^{-t lambda} at a single node.
double simplex_heat_kernel(std::span<const double> lambdas, double t);

// JLO heat cochain: sum over closed band-limited index paths of the entry
// products times the simplex kernel of the visited eigenvalues.  The error
// estimate comes from doubling the path radius.
ValueErr jlo_value(const EigenvalueLaw& law,
                   std::span<const SpectralOperator> ops, double t,
                   long path_radius);

// Deviation norm of [A, e^{-uQ}] + u * int_0^1 e^{-u(1-s)Q} [A,Q] e^{-usQ} ds
// with the integral by Gauss-Legendre quadrature.
double duhamel_check(const EigenvalueLaw& law, const SpectralOperator& a,
                     double u, int quad_nodes = 64);

struct BJloReport {
  ValueErr lhs;
  ValueErr rhs;
  double deviation = 0.0;
};

// Both sides of the coboundary identity for the heat cochain, evaluated
// independently: even arity reduces b chi_n to insertions of ad_Q; odd arity
// carries the extra wrap-around term.
BJloReport b_jlo_check(const EigenvalueLaw& law,
                       std::span<const SpectralOperator> ops, double t,
                       long path_radius);

struct BasicFormulaRow {
  double t = 0.0;
  std::complex<double> jlo{0.0, 0.0};
  std::complex<double> expansion{0.0, 0.0};
  double residual = 0.0;
};

struct BasicFormulaReport {
  std::vector<BasicFormulaRow> rows;
  double slope = 0.0;  // log-log fit of residual vs t
};

// Compares the JLO value against the truncated heat expansion
//   sum_{|k| <= depth} (-t)^{|k|} D(k) tr(A_0 A_1^{(k_1)}...A_n^{(k_n)} e^{-tQ})
// with commutators taken at the matrix level.  The fitted slope should reach
// depth+1 when D(k) carries the correct simplex constants.
BasicFormulaReport basicformula_check(const EigenvalueLaw& law,
                                      std::span<const SpectralOperator> ops,
                                      std::span<const double> t_grid,
                                      int depth, CoefficientConvention conv,
                                      long path_radius);

}  // namespace reslab

#endif
