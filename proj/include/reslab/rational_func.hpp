#ifndef RESLAB_RATIONAL_FUNC_HPP
#define RESLAB_RATIONAL_FUNC_HPP

#include <vector>

#include "reslab/rational.hpp"

namespace reslab {

// Dense univariate polynomial over the Gaussian rationals.
class CPoly {
 public:
  CPoly() = default;
  explicit CPoly(CRational constant) {
    if (!constant.is_zero()) c_.push_back(std::move(constant));
  }

  static CPoly monomial(int degree, CRational coeff = CRational(1)) {
    CPoly p;
    if (coeff.is_zero()) return p;
    p.c_.assign(degree + 1, CRational());
    p.c_[degree] = std::move(coeff);
    return p;
  }

  bool is_zero() const { return c_.empty(); }
  int degree() const { return static_cast<int>(c_.size()) - 1; }

  const CRational& coeff(int i) const {
    static const CRational zero;
    return (i >= 0 && i <= degree()) ? c_[i] : zero;
  }

  void add_coeff(int i, const CRational& v) {
    if (v.is_zero()) return;
    if (i >= static_cast<int>(c_.size())) c_.resize(i + 1);
    c_[i] += v;
    trim();
  }

  CRational eval(const Rational& x) const {
    CRational acc;
    for (int i = degree(); i >= 0; --i) acc = acc * CRational(x) + c_[i];
    return acc;
  }

  // P(x + h), by Horner in the shifted variable.
  CPoly shift(long h) const {
    if (h == 0 || is_zero()) return *this;
    CPoly xh;
    xh.c_ = {CRational(Rational(h)), CRational(1)};
    CPoly out;
    for (int i = degree(); i >= 0; --i) {
      out = out * xh;
      out.add_coeff(0, c_[i]);
    }
    return out;
  }

  friend CPoly operator+(const CPoly& a, const CPoly& b) {
    CPoly out = a;
    if (out.c_.size() < b.c_.size()) out.c_.resize(b.c_.size());
    for (size_t i = 0; i < b.c_.size(); ++i) out.c_[i] += b.c_[i];
    out.trim();
    return out;
  }
  friend CPoly operator-(const CPoly& a, const CPoly& b) {
    return a + b * CRational(-1);
  }
  friend CPoly operator*(const CPoly& a, const CRational& s) {
    CPoly out;
    if (s.is_zero()) return out;
    out.c_ = a.c_;
    for (auto& v : out.c_) v *= s;
    return out;
  }
  friend CPoly operator*(const CPoly& a, const CPoly& b) {
    CPoly out;
    if (a.is_zero() || b.is_zero()) return out;
    out.c_.assign(a.c_.size() + b.c_.size() - 1, CRational());
    for (size_t i = 0; i < a.c_.size(); ++i)
      for (size_t j = 0; j < b.c_.size(); ++j)
        out.c_[i + j] += a.c_[i] * b.c_[j];
    out.trim();
    return out;
  }
  friend bool operator==(const CPoly& a, const CPoly& b) {
    return a.c_ == b.c_;
  }

 private:
  void trim() {
    while (!c_.empty() && c_.back().is_zero()) c_.pop_back();
  }
  std::vector<CRational> c_;
};

// Ratio of polynomials; exact description of banded-operator tail entries.
class CRatFunc {
 public:
  CRatFunc() : num_(), den_(CRational(1)) {}
  explicit CRatFunc(CPoly num) : num_(std::move(num)), den_(CRational(1)) {}
  CRatFunc(CPoly num, CPoly den) : num_(std::move(num)), den_(std::move(den)) {
    if (den_.is_zero()) throw Error("CRatFunc: zero denominator");
    if (num_.is_zero()) den_ = CPoly(CRational(1));
  }

  bool is_zero() const { return num_.is_zero(); }
  const CPoly& num() const { return num_; }
  const CPoly& den() const { return den_; }

  CRational eval(const Rational& x) const {
    CRational d = den_.eval(x);
    if (d.is_zero()) throw Error("CRatFunc: pole hit at evaluation point");
    return num_.eval(x) / d;
  }

  CRatFunc shift(long h) const { return {num_.shift(h), den_.shift(h)}; }

  friend CRatFunc operator+(const CRatFunc& a, const CRatFunc& b) {
    if (a.is_zero()) return b;
    if (b.is_zero()) return a;
    if (a.den_ == b.den_) return {a.num_ + b.num_, a.den_};
    return {a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_};
  }
  friend CRatFunc operator*(const CRatFunc& a, const CRatFunc& b) {
    if (a.is_zero() || b.is_zero()) return {};
    return {a.num_ * b.num_, a.den_ * b.den_};
  }
  friend CRatFunc operator*(const CRatFunc& a, const CRational& s) {
    if (s.is_zero()) return {};
    return {a.num_ * s, a.den_};
  }

 private:
  CPoly num_;
  CPoly den_;
};

}  // namespace reslab

#endif
