#ifndef RESLAB_LAURENT_GERM_HPP
#define RESLAB_LAURENT_GERM_HPP

#include <algorithm>
#include <cmath>
#include <complex>

#include "reslab/errors.hpp"

namespace reslab {

// Truncated Laurent expansion at z = 0:  pole/z + konst + lin*z.
// Everything in scope needs at most pole + finite part; the linear
// coefficient exists so that finite parts survive multiplication by a
// simple-pole factor.  Products of two germs that both carry a pole are
// rejected (the pole order would exceed one).  The coefficient of z^1 in a
// product with a pole factor would need the other factor's z^2 coefficient;
// the arithmetic truncates it, consistent with the z^1 cutoff.
struct LaurentGerm {
  std::complex<double> pole{0.0, 0.0};
  std::complex<double> konst{0.0, 0.0};
  std::complex<double> lin{0.0, 0.0};
  double err = 0.0;

  LaurentGerm() = default;
  LaurentGerm(std::complex<double> p, std::complex<double> c,
              std::complex<double> l, double e = 0.0)
      : pole(p), konst(c), lin(l), err(e) {}

  static LaurentGerm constant(std::complex<double> c, double e = 0.0) {
    return {0.0, c, 0.0, e};
  }

  bool has_pole() const { return std::abs(pole) != 0.0; }

  double norm() const {
    return std::max({std::abs(pole), std::abs(konst), std::abs(lin)});
  }

  double norm1() const { return std::abs(pole) + std::abs(konst) + std::abs(lin); }

  // Multiply by z^m (m >= 0): coefficients shift toward higher order and the
  // top ones fall off the truncation.
  LaurentGerm shift_up(int m) const {
    LaurentGerm g = *this;
    for (int i = 0; i < m; ++i) {
      g.lin = g.konst;
      g.konst = g.pole;
      g.pole = 0.0;
    }
    return g;
  }

  friend LaurentGerm operator+(const LaurentGerm& a, const LaurentGerm& b) {
    return {a.pole + b.pole, a.konst + b.konst, a.lin + b.lin, a.err + b.err};
  }
  friend LaurentGerm operator-(const LaurentGerm& a, const LaurentGerm& b) {
    return {a.pole - b.pole, a.konst - b.konst, a.lin - b.lin, a.err + b.err};
  }
  friend LaurentGerm operator*(const LaurentGerm& a, const LaurentGerm& b) {
    if (a.has_pole() && b.has_pole())
      throw Error("LaurentGerm product of two poles (order would exceed 1)");
    LaurentGerm g;
    g.pole = a.pole * b.konst + a.konst * b.pole;
    g.konst = a.pole * b.lin + a.konst * b.konst + a.lin * b.pole;
    g.lin = a.konst * b.lin + a.lin * b.konst;
    g.err = a.err * b.norm1() + b.err * a.norm1() + 3.0 * a.err * b.err;
    return g;
  }
  friend LaurentGerm operator*(const LaurentGerm& a, std::complex<double> s) {
    return {a.pole * s, a.konst * s, a.lin * s, a.err * std::abs(s)};
  }
  LaurentGerm& operator+=(const LaurentGerm& b) {
    *this = *this + b;
    return *this;
  }
};

}  // namespace reslab

#endif
