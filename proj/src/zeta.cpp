#include "reslab/zeta.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "reslab/errors.hpp"
#include "reslab/special_functions.hpp"

namespace reslab {

namespace {

// Finite formal sum c_e s^e with exponents kept down to `floor_exp`.
struct Series {
  int floor_exp;
  std::map<int, CRational, std::greater<int>> c;

  explicit Series(int floor_e) : floor_exp(floor_e) {}

  void add(int e, const CRational& v) {
    if (e < floor_exp || v.is_zero()) return;
    auto it = c.find(e);
    if (it == c.end())
      c.emplace(e, v);
    else {
      it->second += v;
      if (it->second.is_zero()) c.erase(it);
    }
  }

  Series mul(const Series& o) const {
    Series out(floor_exp);
    for (const auto& [e1, v1] : c)
      for (const auto& [e2, v2] : o.c) out.add(e1 + e2, v1 * v2);
    return out;
  }

  Series scaled(const Rational& s) const {
    Series out(floor_exp);
    for (const auto& [e, v] : c) out.add(e, v * CRational(s));
    return out;
  }
};

// Expansion of a rational function at s -> +infinity, exponents >= floor_exp.
Series expand_at_infinity(const CRatFunc& f, int floor_exp) {
  Series out(floor_exp);
  if (f.is_zero()) return out;
  const CPoly& num = f.num();
  const CPoly& den = f.den();
  const int dn = num.degree();
  const int dd = den.degree();
  const int lead = dn - dd;
  const int count = lead - floor_exp + 1;
  if (count <= 0) return out;
  std::vector<CRational> q(count);
  const CRational& d0 = den.coeff(dd);
  for (int k = 0; k < count; ++k) {
    CRational acc = num.coeff(dn - k);
    for (int j = 1; j <= k; ++j)
      acc -= den.coeff(dd - j) * q[k - j];
    q[k] = acc / d0;
  }
  for (int k = 0; k < count; ++k) out.add(lead - k, q[k]);
  return out;
}

struct BranchGerm {
  LaurentGerm germ;
  double trunc_err = 0.0;
};

// Germ of sum_{s > n0} r(s) lambda(s)^{-z} for one branch, via
//   lambda^{-z} = p_q^{-z} s^{-qz} (1+u)^{-z},  (1+u)^{-z} = e^{-z ln(1+u)}
// expanded to z^2 so pole/konst/lin of the result are all certified.
BranchGerm tail_branch_germ(const EigenvalueLaw& law, const CRatFunc& r,
                            long n0, int floor_exp) {
  BranchGerm out;
  if (r.is_zero()) return out;
  const int q = law.order();
  const Rational& pq = law.p.back();

  Series g0 = expand_at_infinity(r, floor_exp);
  if (g0.c.empty()) return out;

  Series u(floor_exp);
  for (int i = 0; i < q; ++i)
    if (law.p[i] != 0) u.add(i - q, CRational(law.p[i] / pq));

  // ln(1+u) truncated; u has exponents <= -1 so powers terminate.
  Series log1u(floor_exp);
  Series upow = u;
  for (int m = 1; !upow.c.empty(); ++m) {
    log1u = [&] {
      Series t = log1u;
      Rational coeff = Rational(m % 2 == 1 ? 1 : -1, m);
      for (const auto& [e, v] : upow.c) t.add(e, v * CRational(coeff));
      return t;
    }();
    upow = upow.mul(u);
  }

  Series g1(floor_exp), g2(floor_exp);
  g1 = g0.mul(log1u).scaled(Rational(-1));
  g2 = g0.mul(log1u).mul(log1u).scaled(Rational(1, 2));

  const Rational a_off(n0 + 1);
  LaurentGerm total;
  const Series* gs[3] = {&g0, &g1, &g2};
  for (int m = 0; m < 3; ++m) {
    for (const auto& [e, v] : gs[m]->c) {
      LaurentGerm zeta = sf::hurwitz_zeta_germ(-e, a_off, q);
      total += (zeta * v.to_complex()).shift_up(m);
    }
  }
  // p_q^{-z} factor.
  LaurentGerm pq_germ(0.0, 1.0, -std::log(to_double(pq)), 0.0);
  total = total * pq_germ;

  // Engineered truncation estimate from the lowest kept coefficients.
  double boundary = 0.0;
  for (int m = 0; m < 3; ++m)
    for (const auto& [e, v] : gs[m]->c)
      if (e <= floor_exp + 2) boundary += std::abs(v.to_complex());
  const double n0d = static_cast<double>(n0 + 1);
  out.trunc_err =
      8.0 * boundary * std::pow(n0d, floor_exp + 1) / (-floor_exp - 1);
  out.germ = total;
  return out;
}

LaurentGerm germ_at_head_radius(const EigenvalueLaw& law,
                                const SpectralOperator& c, long n0,
                                int floor_exp, double* extra_err) {
  LaurentGerm head;
  CRational head_sum;
  double lin_abs = 0.0;
  for (long n = -n0; n <= n0; ++n) {
    CRational d = c.entry(n, n).trace();
    if (d.is_zero()) continue;
    head_sum += d;
    double ll = std::log(to_double(law.lambda(n)));
    head.lin -= d.to_complex() * ll;
    lin_abs += std::abs(d.to_complex()) * ll;
  }
  head.konst = head_sum.to_complex();
  head.err = 4e-16 * (std::abs(head.konst) + lin_abs);

  BranchGerm plus =
      tail_branch_germ(law, c.diagonal_tail_trace(true), n0, floor_exp);
  BranchGerm minus =
      tail_branch_germ(law, c.diagonal_tail_trace(false), n0, floor_exp);
  *extra_err += plus.trunc_err + minus.trunc_err;
  return head + plus.germ + minus.germ;
}

}  // namespace

ZetaGerm zeta_trace_germ(const EigenvalueLaw& law, const SpectralOperator& c) {
  law.validate();
  const long n0 =
      std::max<long>(32, c.crossover() + c.bandwidth() + 2);
  const int floor_exp = -40;

  double trunc_err = 0.0;
  LaurentGerm g1 = germ_at_head_radius(law, c, n0, floor_exp, &trunc_err);
  LaurentGerm g2 = germ_at_head_radius(law, c, 2 * n0, floor_exp, &trunc_err);

  const double emp = std::max({std::abs(g1.pole - g2.pole),
                               std::abs(g1.konst - g2.konst),
                               std::abs(g1.lin - g2.lin)});
  ZetaGerm out;
  out.germ = g2;
  out.germ.err += 4.0 * emp + trunc_err;
  out.err = out.germ.err;
  return out;
}

ValueErr weighted_trace(const EigenvalueLaw& law, const SpectralOperator& c) {
  ZetaGerm g = zeta_trace_germ(law, c);
  return {g.germ.konst, g.err};
}

}  // namespace reslab
