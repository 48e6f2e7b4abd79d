#include "reslab/special_functions.hpp"

#include <boost/multiprecision/mpfr.hpp>

#include <cstdlib>
#include <map>
#include <string>
#include <tuple>
#include <mutex>
#include <vector>

namespace reslab::sf {

using Real = boost::multiprecision::mpfr_float;

namespace {

int read_precision_bits() {
  if (const char* env = std::getenv("RES_LAB_PRECISION_BITS")) {
    int v = std::atoi(env);
    if (v >= 64 && v <= 16384) return v;
  }
  return 256;
}

std::once_flag g_prec_once;

void ensure_precision() {
  std::call_once(g_prec_once, [] {
    // mpfr_float carries precision in decimal digits.
    int digits = static_cast<int>(precision_bits() * 0.30103) + 2;
    Real::default_precision(digits);
  });
}

Real to_real(const Rational& r) {
  ensure_precision();
  return Real(numerator(r).str()) / Real(denominator(r).str());
}

// Exact Bernoulli numbers B_0..B_n via the defining recurrence.
const std::vector<Rational>& bernoulli_table() {
  static const std::vector<Rational> table = [] {
    const int n_max = 70;
    std::vector<Rational> b(n_max + 1);
    std::vector<std::vector<Integer>> binom(n_max + 2);
    for (int n = 0; n <= n_max + 1; ++n) {
      binom[n].resize(n + 1);
      binom[n][0] = 1;
      binom[n][n] = 1;
      for (int k = 1; k < n; ++k)
        binom[n][k] = binom[n - 1][k - 1] + binom[n - 1][k];
    }
    b[0] = 1;
    for (int m = 1; m <= n_max; ++m) {
      Rational acc(0);
      for (int j = 0; j < m; ++j) acc += Rational(binom[m + 1][j]) * b[j];
      b[m] = -acc / Rational(binom[m + 1][m]);
    }
    return b;
  }();
  return table;
}

constexpr int kEmBernoulliTerms = 28;  // uses B_2 .. B_56

// Euler-Maclaurin tail cutoff: push the summation start far enough out that
// the asymptotic Bernoulli series converges to ~precision for |s| <= ~80.
long em_cutoff(const Rational& a) {
  double av = to_double(a);
  long n = 48;
  if (av < 48.0) n = 48 + static_cast<long>(48.0 - av);
  return n;
}

// zeta_H(s, a) = sum_{j>=0} (a+j)^{-s}, continued in s, for real s != 1.
Real hurwitz_zeta_real(const Real& s, const Rational& a) {
  ensure_precision();
  const long nc = em_cutoff(a);
  const Real ar = to_real(a);
  Real head = 0;
  for (long j = 0; j < nc; ++j) head += pow(ar + j, -s);
  const Real big = ar + nc;
  Real acc = head;
  acc += pow(big, 1 - s) / (s - 1);
  acc += pow(big, -s) / 2;
  // sum_k B_{2k}/(2k)! * (s)_{2k-1} * big^{-s-2k+1}
  Real poch = s;  // rising factorial s(s+1)...(s+2k-2)
  Real power = pow(big, -s - 1);
  const auto& bern = bernoulli_table();
  Real fact(1);
  for (int k = 1; k <= kEmBernoulliTerms; ++k) {
    fact *= (2 * k - 1);
    fact *= (2 * k);
    acc += to_real(bern[2 * k]) / fact * poch * power;
    poch *= (s + (2 * k - 1));
    poch *= (s + 2 * k);
    power /= (big * big);
  }
  return acc;
}

Real digamma_real(const Rational& a) {
  ensure_precision();
  const long nc = em_cutoff(a);
  const Real ar = to_real(a);
  Real head = 0;
  for (long j = 0; j < nc; ++j) head += 1 / (ar + j);
  const Real big = ar + nc;
  Real acc = log(big) - 1 / (2 * big) - head;
  Real power = big * big;
  const auto& bern = bernoulli_table();
  for (int k = 1; k <= kEmBernoulliTerms; ++k) {
    acc -= to_real(bern[2 * k]) / (2 * k) / power;
    power *= big * big;
  }
  return acc;
}

}  // namespace

int precision_bits() {
  static const int bits = read_precision_bits();
  return bits;
}

double hurwitz_zeta(double s, const Rational& a) {
  return hurwitz_zeta_real(Real(s), a).convert_to<double>();
}

double hurwitz_zeta_ds(double s, const Rational& a) {
  // Central difference at working precision; the step is far below the
  // requested output accuracy but far above the mpfr noise floor.
  ensure_precision();
  Real h = pow(Real(2), -precision_bits() / 4);
  Real v = (hurwitz_zeta_real(Real(s) + h, a) -
            hurwitz_zeta_real(Real(s) - h, a)) /
           (2 * h);
  return v.convert_to<double>();
}

double digamma(const Rational& a) {
  return digamma_real(a).convert_to<double>();
}

double hurwitz_expansion_linear(const Rational& a) {
  // zeta_H(1+eps, a) = 1/eps - psi(a) + c1*eps + ...; extract c1 by a
  // symmetric combination that cancels the pole exactly.
  ensure_precision();
  Real h = pow(Real(2), -precision_bits() / 4);
  Real plus = hurwitz_zeta_real(1 + h, a) - 1 / h;
  Real minus = hurwitz_zeta_real(1 - h, a) + 1 / h;
  return ((plus - minus) / (2 * h)).convert_to<double>();
}

LaurentGerm hurwitz_zeta_germ(int s0, const Rational& a, int scale) {
  if (a <= 0) throw OutOfRange("hurwitz_zeta_germ: offset a must be positive");
  if (scale <= 0)
    throw OutOfRange("hurwitz_zeta_germ: scale must be positive");

  static std::mutex cache_mutex;
  static std::map<std::tuple<int, std::string, int>, LaurentGerm> cache;
  const std::tuple<int, std::string, int> key{s0, a.str(), scale};
  {
    std::lock_guard<std::mutex> lock(cache_mutex);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
  }

  LaurentGerm g;
  g.err = 1e-14;
  if (s0 == 1) {
    g.pole = 1.0 / scale;
    g.konst = -digamma(a);
    g.lin = static_cast<double>(scale) * hurwitz_expansion_linear(a);
  } else {
    g.konst = hurwitz_zeta(s0, a);
    g.lin = static_cast<double>(scale) * hurwitz_zeta_ds(s0, a);
  }
  g.err += 4e-16 * g.norm();

  std::lock_guard<std::mutex> lock(cache_mutex);
  cache.emplace(key, g);
  return g;
}

}  // namespace reslab::sf
