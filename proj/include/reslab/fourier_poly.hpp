#ifndef RESLAB_FOURIER_POLY_HPP
#define RESLAB_FOURIER_POLY_HPP

#include <cstdlib>
#include <map>
#include <vector>

#include "reslab/rational.hpp"

namespace reslab {

// Finitely supported trigonometric polynomial x -> sum_m c_m e^{imx} on the
// circle, with Gaussian rational coefficients.  Zero coefficients are never
// stored, so the map support *is* the recorded support bound.
class FourierPoly {
 public:
  FourierPoly() = default;
  explicit FourierPoly(CRational constant) {
    if (!constant.is_zero()) c_[0] = std::move(constant);
  }

  static FourierPoly harmonic(long freq, CRational coeff = CRational(1)) {
    FourierPoly p;
    if (!coeff.is_zero()) p.c_[freq] = std::move(coeff);
    return p;
  }

  bool is_zero() const { return c_.empty(); }

  long support_bound() const {
    long b = 0;
    for (const auto& [m, v] : c_) b = std::max(b, std::labs(m));
    return b;
  }

  CRational coeff(long m) const {
    auto it = c_.find(m);
    return it == c_.end() ? CRational() : it->second;
  }

  void set_coeff(long m, CRational v) {
    if (v.is_zero())
      c_.erase(m);
    else
      c_[m] = std::move(v);
  }

  void add_coeff(long m, const CRational& v) {
    auto it = c_.find(m);
    if (it == c_.end()) {
      if (!v.is_zero()) c_[m] = v;
    } else {
      it->second += v;
      if (it->second.is_zero()) c_.erase(it);
    }
  }

  const std::map<long, CRational>& coeffs() const { return c_; }

  friend FourierPoly operator+(const FourierPoly& a, const FourierPoly& b) {
    FourierPoly out = a;
    for (const auto& [m, v] : b.c_) out.add_coeff(m, v);
    return out;
  }
  friend FourierPoly operator-(const FourierPoly& a, const FourierPoly& b) {
    FourierPoly out = a;
    for (const auto& [m, v] : b.c_) out.add_coeff(m, -v);
    return out;
  }
  friend FourierPoly operator*(const FourierPoly& a, const CRational& s) {
    FourierPoly out;
    if (s.is_zero()) return out;
    for (const auto& [m, v] : a.c_) out.c_[m] = v * s;
    return out;
  }
  friend bool operator==(const FourierPoly& a, const FourierPoly& b) {
    return a.c_ == b.c_;
  }

  CRational eval_mean() const { return coeff(0); }

  FourierPoly& operator+=(const FourierPoly& b) {
    for (const auto& [m, v] : b.c_)
      add_coeff(m, v);
    return *this;
  }

 private:
  std::map<long, CRational> c_;
};

// Pointwise product: discrete convolution of the coefficient maps.  The
// support bound of the result is at most the sum of the operand bounds.
inline FourierPoly convolve(const FourierPoly& f, const FourierPoly& g) {
  FourierPoly out;
  for (const auto& [m1, v1] : f.coeffs())
    for (const auto& [m2, v2] : g.coeffs()) out.add_coeff(m1 + m2, v1 * v2);
  return out;
}

// D_x = -i d/dx, so D_x e^{imx} = m e^{imx}.
inline FourierPoly derivative_x(const FourierPoly& f) {
  FourierPoly out;
  for (const auto& [m, v] : f.coeffs())
    if (m != 0) out.set_coeff(m, v * CRational(Rational(m)));
  return out;
}

// Square matrix of Fourier polynomials; the x-dependent coefficient of one
// homogeneous symbol component.
class FpMatrix {
 public:
  FpMatrix() : r_(0) {}
  explicit FpMatrix(int r) : r_(r), e_(static_cast<size_t>(r) * r) {}

  static FpMatrix identity(int r, CRational scale = CRational(1)) {
    FpMatrix m(r);
    for (int i = 0; i < r; ++i) m.at(i, i) = FourierPoly(scale);
    return m;
  }
  static FpMatrix scalar(int r, FourierPoly f) {
    FpMatrix m(r);
    for (int i = 0; i < r; ++i) m.at(i, i) = f;
    return m;
  }

  int rank() const { return r_; }

  FourierPoly& at(int i, int j) { return e_[static_cast<size_t>(i) * r_ + j]; }
  const FourierPoly& at(int i, int j) const {
    return e_[static_cast<size_t>(i) * r_ + j];
  }

  bool is_zero() const {
    for (const auto& p : e_)
      if (!p.is_zero()) return false;
    return true;
  }

  long support_bound() const {
    long b = 0;
    for (const auto& p : e_) b = std::max(b, p.support_bound());
    return b;
  }

  FourierPoly trace() const {
    FourierPoly t;
    for (int i = 0; i < r_; ++i) t += at(i, i);
    return t;
  }

  friend FpMatrix operator+(const FpMatrix& a, const FpMatrix& b) {
    FpMatrix out(a.r_);
    for (size_t i = 0; i < a.e_.size(); ++i) out.e_[i] = a.e_[i] + b.e_[i];
    return out;
  }
  friend FpMatrix operator-(const FpMatrix& a, const FpMatrix& b) {
    FpMatrix out(a.r_);
    for (size_t i = 0; i < a.e_.size(); ++i) out.e_[i] = a.e_[i] - b.e_[i];
    return out;
  }
  friend FpMatrix operator*(const FpMatrix& a, const CRational& s) {
    FpMatrix out(a.r_);
    for (size_t i = 0; i < a.e_.size(); ++i) out.e_[i] = a.e_[i] * s;
    return out;
  }
  // Matrix product with pointwise (convolution) products of the entries.
  friend FpMatrix operator*(const FpMatrix& a, const FpMatrix& b) {
    FpMatrix out(a.r_);
    for (int i = 0; i < a.r_; ++i)
      for (int j = 0; j < a.r_; ++j) {
        FourierPoly acc;
        for (int k = 0; k < a.r_; ++k)
          acc += convolve(a.at(i, k), b.at(k, j));
        out.at(i, j) = acc;
      }
    return out;
  }
  friend bool operator==(const FpMatrix& a, const FpMatrix& b) {
    return a.r_ == b.r_ && a.e_ == b.e_;
  }

 private:
  int r_;
  std::vector<FourierPoly> e_;
};

inline FpMatrix derivative_x(const FpMatrix& m) {
  FpMatrix out(m.rank());
  for (int i = 0; i < m.rank(); ++i)
    for (int j = 0; j < m.rank(); ++j) out.at(i, j) = derivative_x(m.at(i, j));
  return out;
}

}  // namespace reslab

#endif
