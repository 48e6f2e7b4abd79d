#ifndef RESLAB_SPECIAL_FUNCTIONS_HPP
#define RESLAB_SPECIAL_FUNCTIONS_HPP

#include "reslab/laurent_germ.hpp"
#include "reslab/rational.hpp"

namespace reslab::sf {

// Working precision in bits for the Euler-Maclaurin evaluations, from
// RES_LAB_PRECISION_BITS (default 256).  Applied lazily on first use.
int precision_bits();

// Hurwitz zeta and friends, evaluated to well below 1e-13 absolute error
// for the argument ranges the zeta engine produces.
double hurwitz_zeta(double s, const Rational& a);
double hurwitz_zeta_ds(double s, const Rational& a);  // d/ds
double digamma(const Rational& a);
// z^1 coefficient of zeta_H(1 + eps, a) around eps = 0 (equals -gamma_1(a)).
double hurwitz_expansion_linear(const Rational& a);

// Germ at z = 0 of z -> zeta_H(s0 + scale*z, a).
//   s0 == 1: pole = 1/scale, konst = -digamma(a).
//   s0 != 1: pole = 0, konst = zeta_H(s0, a), lin = scale * zeta_H'(s0, a).
// Rejects a <= 0.
LaurentGerm hurwitz_zeta_germ(int s0, const Rational& a, int scale);

}  // namespace reslab::sf

#endif
