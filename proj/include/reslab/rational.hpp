#ifndef RESLAB_RATIONAL_HPP
#define RESLAB_RATIONAL_HPP

#include <boost/multiprecision/gmp.hpp>

#include <complex>
#include <cstdint>
#include <string>

#include "reslab/errors.hpp"

namespace reslab {

using Rational = boost::multiprecision::mpq_rational;
using Integer = boost::multiprecision::mpz_int;

inline Rational rat(long long num, long long den = 1) {
  if (den == 0) throw Error("rational with zero denominator");
  return Rational(num, den);
}

inline double to_double(const Rational& r) { return r.convert_to<double>(); }

// Gaussian rational: the coefficient field for every symbol in the exact
// layer.  Equality, +, -, * and division by nonzero are exact.
struct CRational {
  Rational re{0};
  Rational im{0};

  CRational() = default;
  CRational(Rational r) : re(std::move(r)) {}  // NOLINT(google-explicit-constructor)
  CRational(Rational r, Rational i) : re(std::move(r)), im(std::move(i)) {}
  CRational(long long r) : re(r) {}  // NOLINT(google-explicit-constructor)
  CRational(long long r, long long i) : re(r), im(i) {}

  bool is_zero() const { return re == 0 && im == 0; }
  bool is_real() const { return im == 0; }

  CRational conj() const { return {re, -im}; }

  std::complex<double> to_complex() const {
    return {to_double(re), to_double(im)};
  }

  friend CRational operator+(const CRational& a, const CRational& b) {
    return {a.re + b.re, a.im + b.im};
  }
  friend CRational operator-(const CRational& a, const CRational& b) {
    return {a.re - b.re, a.im - b.im};
  }
  friend CRational operator-(const CRational& a) { return {-a.re, -a.im}; }
  friend CRational operator*(const CRational& a, const CRational& b) {
    return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
  }
  friend CRational operator/(const CRational& a, const CRational& b) {
    Rational n = b.re * b.re + b.im * b.im;
    if (n == 0) throw Error("CRational division by zero");
    return {(a.re * b.re + a.im * b.im) / n, (a.im * b.re - a.re * b.im) / n};
  }
  CRational& operator+=(const CRational& b) {
    re += b.re;
    im += b.im;
    return *this;
  }
  CRational& operator-=(const CRational& b) {
    re -= b.re;
    im -= b.im;
    return *this;
  }
  CRational& operator*=(const CRational& b) {
    *this = *this * b;
    return *this;
  }
  friend bool operator==(const CRational& a, const CRational& b) {
    return a.re == b.re && a.im == b.im;
  }
  friend bool operator!=(const CRational& a, const CRational& b) {
    return !(a == b);
  }
};

inline std::string to_string(const Rational& r) { return r.str(); }

inline std::string to_string(const CRational& c) {
  if (c.im == 0) return c.re.str();
  Rational ai = c.im < 0 ? Rational(-c.im) : c.im;
  return c.re.str() + (c.im < 0 ? "-" : "+") + ai.str() + "i";
}

inline Rational rational_pow(const Rational& base, int e) {
  if (e == 0) return Rational(1);
  Rational acc(1);
  Rational b = base;
  int n = e < 0 ? -e : e;
  for (int i = 0; i < n; ++i) acc *= b;
  if (e < 0) {
    if (acc == 0) throw Error("rational_pow: zero base with negative power");
    acc = Rational(1) / acc;
  }
  return acc;
}

inline Rational factorial(int n) {
  Rational acc(1);
  for (int i = 2; i <= n; ++i) acc *= i;
  return acc;
}

}  // namespace reslab

#endif
