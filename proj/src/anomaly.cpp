#include "reslab/anomaly.hpp"

#include <cmath>

#include "reslab/errors.hpp"

namespace reslab {

namespace {

constexpr int kResidueFloor = -kDimM - 1;

bool any_zero(std::span<const DeepSymbol> ops) {
  for (const auto& s : ops)
    if (deg_is_neg_inf(s.order_bound())) return true;
  return false;
}

int total_order_bound(std::span<const DeepSymbol> ops) {
  int t = 0;
  for (const auto& s : ops) t = deg_add(t, s.order_bound());
  return t;
}

CRational residue_of(std::span<const DeepSymbol> factors) {
  return wodzicki_residue(product_at(factors, kResidueFloor));
}

// Lazily built families A_i^{(j)} and Q^{-m}.
class AdCache {
 public:
  AdCache(const Weight& q, std::span<const DeepSymbol> ops) : q_(q) {
    base_.assign(ops.begin(), ops.end());
    ad_.resize(ops.size());
  }

  const DeepSymbol& ad(size_t i, int j) {
    if (j == 0) return base_[i];
    auto& row = ad_[i];
    while (static_cast<int>(row.size()) < j)
      row.push_back(deep_ad_power(q_, base_[i],
                                  static_cast<int>(row.size()) + 1));
    return row[j - 1];
  }

  const DeepSymbol& qpow(int m) {
    while (static_cast<int>(qp_.size()) < m)
      qp_.push_back(deep_power_neg(q_, static_cast<int>(qp_.size()) + 1));
    return qp_[m - 1];
  }

 private:
  Weight q_;
  std::vector<DeepSymbol> base_;
  std::vector<std::vector<DeepSymbol>> ad_;
  std::vector<DeepSymbol> qp_;
};

std::vector<DeepSymbol> wrap_exact(std::span<const ClassicalSymbol> ops) {
  std::vector<DeepSymbol> out;
  out.reserve(ops.size());
  for (const auto& s : ops) out.push_back(DeepSymbol::exact(s));
  return out;
}

CRational correction_sum_deep(const Weight& Q, std::span<const DeepSymbol> ops,
                              CoefficientConvention conv, TermTable* table,
                              int extra_shells) {
  const int n = static_cast<int>(ops.size()) - 1;
  if (n < 0) throw Error("correction_sum: empty argument list");
  if (n == 0) return CRational();
  if (any_zero(ops)) return CRational();
  const int total = total_order_bound(ops);
  const int kmax = total + kDimM + extra_shells;
  if (kmax < 1) return CRational();

  AdCache cache(Q, ops);
  const Rational inv_q = Rational(1) / Q.q;
  CRational acc;
  for (int m = 1; m <= kmax; ++m) {
    const Rational sign = (m % 2 == 0) ? Rational(1) : Rational(-1);
    const Rational shell = sign * factorial(m - 1) * inv_q;
    for_each_multiindex(n, m, [&](const MultiIndex& k) {
      std::vector<DeepSymbol> factors;
      factors.reserve(n + 2);
      factors.push_back(cache.ad(0, 0));
      for (int i = 1; i <= n; ++i)
        factors.push_back(cache.ad(i, k.k[i - 1]));
      factors.push_back(cache.qpow(m));
      CRational res = residue_of(factors);
      Rational coeff = shell * anomaly_coefficient(k, n, conv);
      acc += res * CRational(coeff);
      if (table) table->push_back({k, -1, coeff, res});
    });
  }
  return acc;
}

}  // namespace

CRational correction_sum(const Weight& Q, std::span<const ClassicalSymbol> ops,
                         CoefficientConvention conv, TermTable* table,
                         int extra_shells) {
  auto deep = wrap_exact(ops);
  return correction_sum_deep(Q, deep, conv, table, extra_shells);
}

CRational mellin_residue(const Weight& Q,
                         std::span<const ClassicalSymbol> ops) {
  if (ops.empty()) throw Error("mellin_residue: empty argument list");
  auto deep = wrap_exact(ops);
  if (any_zero(deep)) return CRational();
  CRational res = residue_of(deep);
  return res * CRational(Rational(1) / Q.q);
}

CRational coboundary_anomaly(const Weight& Q,
                             std::span<const ClassicalSymbol> ops,
                             CoefficientConvention conv, TermTable* table,
                             int extra_shells) {
  const int count = static_cast<int>(ops.size());
  if (count < 2 || count % 2 != 0)
    throw OutOfRange("coboundary_anomaly: expects 2p+2 arguments");
  const int p = count / 2 - 1;
  const int slots = 2 * p + 1;
  auto deep = wrap_exact(ops);
  if (any_zero(deep)) return CRational();
  const int total = total_order_bound(deep);
  const int kmax = total + kDimM - 1 + extra_shells;
  if (kmax < 0) return CRational();

  AdCache cache(Q, deep);
  const Rational inv_q = Rational(1) / Q.q;
  CRational acc;
  for (int m = 0; m <= kmax; ++m) {
    const Rational sign = (m % 2 == 0) ? Rational(1) : Rational(-1);
    const Rational shell = sign * factorial(m) * inv_q;
    for_each_multiindex(slots, m, [&](const MultiIndex& k) {
      const Rational coeff = shell * anomaly_coefficient(k, 2 * p, conv);
      for (int j = 0; j <= p; ++j) {
        std::vector<DeepSymbol> factors;
        factors.reserve(slots + 2);
        factors.push_back(cache.ad(0, 0));
        for (int i = 1; i <= slots; ++i) {
          int bump = (i == 2 * j + 1) ? 1 : 0;
          factors.push_back(cache.ad(i, k.k[i - 1] + bump));
        }
        factors.push_back(cache.qpow(m + 1));
        CRational res = residue_of(factors);
        acc += res * CRational(coeff);
        if (table) table->push_back({k, j, coeff, res});
      }
    });
  }
  return acc;
}

CochainValue weighted_cochain(const Weight& Q,
                              std::span<const ClassicalSymbol> ops,
                              const TraceProvider& trace_provider,
                              CoefficientConvention conv) {
  auto [value, err] = trace_provider(ops);
  CRational corr = correction_sum(Q, ops, conv);
  CochainValue out;
  out.value = value + corr.to_complex();
  out.err = err;
  return out;
}

CochainValue weighted_cochain_grouped(
    const Weight& Q, std::span<const std::vector<ClassicalSymbol>> groups,
    const TraceProvider& trace_provider, CoefficientConvention conv) {
  std::vector<DeepSymbol> deep;
  std::vector<ClassicalSymbol> flat;
  deep.reserve(groups.size());
  for (const auto& g : groups) {
    if (g.empty()) throw Error("weighted_cochain_grouped: empty group");
    DeepSymbol d = DeepSymbol::exact(g[0]);
    for (size_t i = 1; i < g.size(); ++i)
      d = deep_compose(d, DeepSymbol::exact(g[i]));
    deep.push_back(std::move(d));
    for (const auto& s : g) flat.push_back(s);
  }
  auto [value, err] = trace_provider(flat);
  CRational corr = correction_sum_deep(Q, deep, conv, nullptr, 0);
  CochainValue out;
  out.value = value + corr.to_complex();
  out.err = err;
  return out;
}

FamilySpec FamilySpec::make(Weight base, ClassicalSymbol direction,
                            std::optional<EigenvalueLaw> eigen_direction,
                            Rational t_lo, Rational t_hi) {
  if (direction.order_bound() > base.q)
    throw NotElliptic("family direction must have order <= q");
  if (t_lo > t_hi) throw OutOfRange("family: empty t range");
  FamilySpec f;
  f.base = std::move(base);
  f.direction = std::move(direction);
  f.eigen_direction = std::move(eigen_direction);
  f.t_lo = std::move(t_lo);
  f.t_hi = std::move(t_hi);
  // Leading positivity is affine in t: endpoint checks settle the range.
  weight_at(f, f.t_lo);
  weight_at(f, f.t_hi);
  return f;
}

Weight weight_at(const FamilySpec& f, const Rational& t) {
  ClassicalSymbol sym = add(f.base.symbol, scale(f.direction, CRational(t)));
  std::optional<EigenvalueLaw> law;
  if (f.base.law) {
    if (f.eigen_direction)
      law = *f.base.law + (*f.eigen_direction * t);
    else if (f.direction.is_zero())
      law = f.base.law;
  }
  return Weight::from_symbol(std::move(sym), f.base.q, std::move(law));
}

CRational family_derivative(const FamilySpec& f, const Rational& t,
                            std::span<const ClassicalSymbol> ops,
                            CoefficientConvention conv, TermTable* table,
                            int extra_shells) {
  if (t < f.t_lo || t > f.t_hi)
    throw OutOfRange("family_derivative: t outside the family range");
  if (ops.empty()) throw Error("family_derivative: empty argument list");
  if (f.direction.is_zero()) return CRational();

  const Weight Qt = weight_at(f, t);
  const int n = static_cast<int>(ops.size()) - 1;
  const int slots = n + 1;

  std::vector<DeepSymbol> deep = wrap_exact(ops);
  if (any_zero(deep)) return CRational();
  std::vector<DeepSymbol> with_dot = deep;
  with_dot.push_back(DeepSymbol::exact(f.direction));

  const int total = total_order_bound(deep);
  const int kmax = total + kDimM + extra_shells;
  if (kmax < 0) return CRational();

  AdCache cache(Qt, with_dot);
  const size_t dot_index = ops.size();
  const Rational inv_q = Rational(1) / Qt.q;
  CRational acc;
  for (int m = 0; m <= kmax; ++m) {
    const Rational sign = (m % 2 == 0) ? Rational(-1) : Rational(1);
    const Rational shell = sign * factorial(m) * inv_q;
    for_each_multiindex(slots, m, [&](const MultiIndex& k) {
      const Rational coeff = shell * anomaly_coefficient(k, n, conv);
      for (int j = 1; j <= n + 1; ++j) {
        std::vector<DeepSymbol> factors;
        factors.reserve(slots + 2);
        factors.push_back(cache.ad(0, 0));
        // positions 1..n+1 carry exponents k_1..k_{n+1}; the derivative of
        // the weight stands at the j-th position.
        for (int pos = 1; pos <= n + 1; ++pos) {
          const int exponent = k.k[pos - 1];
          if (pos < j)
            factors.push_back(cache.ad(pos, exponent));
          else if (pos == j)
            factors.push_back(cache.ad(dot_index, exponent));
          else
            factors.push_back(cache.ad(pos - 1, exponent));
        }
        factors.push_back(cache.qpow(m + 1));
        CRational res = residue_of(factors);
        acc += res * CRational(coeff);
        if (table) table->push_back({k, j, coeff, res});
      }
    });
  }
  return acc;
}

void gauss_legendre_01(int n, std::vector<double>& nodes,
                       std::vector<double>& weights) {
  nodes.resize(n);
  weights.resize(n);
  for (int i = 0; i < n; ++i) {
    // Newton on P_n with the Chebyshev initial guess.
    double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
    double pp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      if (n == 1) p0 = 1.0;
      for (int k = 2; k <= n; ++k) {
        double pk = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = pk;
      }
      double pn = (n == 1) ? x : p1;
      double pm = (n == 1) ? 1.0 : p0;
      pp = n * (x * pn - pm) / (x * x - 1.0);
      double dx = pn / pp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    nodes[i] = 0.5 * (1.0 - x);  // map [-1,1] -> [0,1], ascending
    weights[i] = 1.0 / ((1.0 - x * x) * pp * pp);
  }
}

CochainValue interpolation_difference(const FamilySpec& f,
                                      std::span<const ClassicalSymbol> ops,
                                      int nodes, CoefficientConvention conv) {
  if (nodes < 1) throw OutOfRange("interpolation_difference: nodes < 1");
  if (f.direction.is_zero()) return CochainValue::exact(CRational());

  auto quad = [&](int m) {
    std::vector<double> x, w;
    gauss_legendre_01(m, x, w);
    std::complex<double> acc{0.0, 0.0};
    const double scale = std::ldexp(1.0, 48);
    for (int i = 0; i < m; ++i) {
      // Rationalize the node so the integrand stays an exact residue sum;
      // the shift is ~2^-48, far below the quadrature error scale.
      Rational t(static_cast<long long>(std::llround(x[i] * scale)),
                 static_cast<long long>(scale));
      CRational v = family_derivative(f, t, ops, conv);
      acc += w[i] * v.to_complex();
    }
    return acc;
  };

  std::complex<double> coarse = quad(nodes);
  std::complex<double> fine = quad(2 * nodes);
  CochainValue out;
  out.value = fine;
  out.err = std::abs(fine - coarse) + 1e-12;
  return out;
}

}  // namespace reslab
