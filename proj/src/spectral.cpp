#include "reslab/spectral.hpp"

#include <algorithm>

#include "reslab/errors.hpp"

namespace reslab {

SpectralOperator::SpectralOperator(int rank, long radius, long bandwidth,
                                   long crossover)
    : rank_(rank), radius_(radius), bandwidth_(bandwidth),
      crossover_(crossover) {
  if (radius_ < crossover_ + bandwidth_)
    throw RadiusTooSmall("operator radius " + std::to_string(radius_) +
                         " cannot cover crossover " +
                         std::to_string(crossover_) + " plus bandwidth " +
                         std::to_string(bandwidth_));
  blocks_.assign(static_cast<size_t>(2 * radius_ + 1) * (2 * bandwidth_ + 1),
                 CMat(rank_));
  tail_plus_.assign(static_cast<size_t>(2 * bandwidth_ + 1) * rank_ * rank_,
                    CRatFunc());
  tail_minus_ = tail_plus_;
}

CMat& SpectralOperator::block(long n, long delta) {
  return blocks_[static_cast<size_t>(n + radius_) * (2 * bandwidth_ + 1) +
                 (delta + bandwidth_)];
}
const CMat& SpectralOperator::block(long n, long delta) const {
  return blocks_[static_cast<size_t>(n + radius_) * (2 * bandwidth_ + 1) +
                 (delta + bandwidth_)];
}

size_t SpectralOperator::tail_index(long delta, int i, int j) const {
  return (static_cast<size_t>(delta + bandwidth_) * rank_ + i) * rank_ + j;
}

CRatFunc& SpectralOperator::tail(bool plus, long delta, int i, int j) {
  return (plus ? tail_plus_ : tail_minus_)[tail_index(delta, i, j)];
}
const CRatFunc& SpectralOperator::tail(bool plus, long delta, int i,
                                       int j) const {
  return (plus ? tail_plus_ : tail_minus_)[tail_index(delta, i, j)];
}

CMat SpectralOperator::entry(long m, long n) const {
  CMat zero(rank_);
  const long delta = m - n;
  if (delta > bandwidth_ || delta < -bandwidth_) return zero;
  if (std::labs(m) <= radius_ && std::labs(n) <= radius_)
    return block(n, delta);
  if (n > crossover_) {
    CMat out(rank_);
    for (int i = 0; i < rank_; ++i)
      for (int j = 0; j < rank_; ++j) {
        const CRatFunc& f = tail(true, delta, i, j);
        if (!f.is_zero()) out.at(i, j) = f.eval(Rational(n));
      }
    return out;
  }
  if (n < -crossover_) {
    CMat out(rank_);
    for (int i = 0; i < rank_; ++i)
      for (int j = 0; j < rank_; ++j) {
        const CRatFunc& f = tail(false, delta, i, j);
        if (!f.is_zero()) out.at(i, j) = f.eval(Rational(-n));
      }
    return out;
  }
  throw RadiusTooSmall("entry (" + std::to_string(m) + "," +
                       std::to_string(n) +
                       ") outside both the materialized square and the tail "
                       "region");
}

CRatFunc SpectralOperator::diagonal_tail_trace(bool plus) const {
  CRatFunc acc;
  for (int i = 0; i < rank_; ++i) acc = acc + tail(plus, 0, i, i);
  return acc;
}

SpectralOperator quantize(const ClassicalSymbol& a, long radius) {
  if (a.valid_down_to() != kNegInfDeg)
    throw TailNotRational(
        "quantize requires an exact symbol (finite validity floor given)");
  const int rank = a.rank();
  const long w = a.support_bound();
  SpectralOperator op(rank, radius, w, 0);

  // Materialized columns.
  for (long n = -radius; n <= radius; ++n) {
    FpMatrix value(rank);
    bool any = false;
    for (const auto& [d, t] : a.terms()) {
      if (n == 0) {
        if (d != 0) continue;
        value = value + t.plus;
        any = true;
        continue;
      }
      const FpMatrix& branch = (n > 0) ? t.plus : t.minus;
      Rational pw = rational_pow(Rational(n > 0 ? n : -n), d);
      value = value + branch * CRational(pw);
      any = true;
    }
    if (!any) continue;
    for (long delta = -w; delta <= w; ++delta) {
      CMat blk(rank);
      bool nz = false;
      for (int i = 0; i < rank; ++i)
        for (int j = 0; j < rank; ++j) {
          CRational c = value.at(i, j).coeff(delta);
          if (!c.is_zero()) nz = true;
          blk.at(i, j) = std::move(c);
        }
      if (nz) op.block(n, delta) = std::move(blk);
    }
  }

  // Tail rules: Laurent polynomials of the column index per branch.
  for (const auto& [d, t] : a.terms()) {
    for (int branch = 0; branch < 2; ++branch) {
      const FpMatrix& mat = branch == 0 ? t.plus : t.minus;
      for (int i = 0; i < rank; ++i)
        for (int j = 0; j < rank; ++j)
          for (const auto& [freq, coeff] : mat.at(i, j).coeffs()) {
            if (std::labs(freq) > w) continue;
            CRatFunc mono =
                d >= 0 ? CRatFunc(CPoly::monomial(d, coeff))
                       : CRatFunc(CPoly(coeff), CPoly::monomial(-d));
            CRatFunc& slot = op.tail(branch == 0, freq, i, j);
            slot = slot + mono;
          }
    }
  }
  return op;
}

SpectralOperator identity_operator(int rank, long radius) {
  return quantize(ClassicalSymbol::identity(rank), radius);
}

SpectralOperator diagonal_law_power(const EigenvalueLaw& law, int power,
                                    long radius, int rank) {
  law.validate();
  SpectralOperator op(rank, radius, 0, 0);
  for (long n = -radius; n <= radius; ++n) {
    CRational v{rational_pow(law.lambda(n), power)};
    op.block(n, 0) = CMat::identity(rank) * v;
  }
  CPoly lam;
  for (int i = 0; i <= law.order(); ++i)
    lam.add_coeff(i, CRational(law.p[i]));
  CPoly lam_pow(CRational(1));
  for (int i = 0; i < std::abs(power); ++i) lam_pow = lam_pow * lam;
  CRatFunc f = power >= 0 ? CRatFunc(lam_pow)
                          : CRatFunc(CPoly(CRational(1)), lam_pow);
  for (int i = 0; i < rank; ++i) {
    op.tail(true, 0, i, i) = f;
    op.tail(false, 0, i, i) = f;
  }
  return op;
}

SpectralOperator rank_one_diag(long n0, const CRational& value, long radius,
                               int rank) {
  SpectralOperator op(rank, radius, 0, std::labs(n0));
  if (std::labs(n0) > radius)
    throw RadiusTooSmall("rank_one_diag: entry outside the radius");
  op.block(n0, 0) = CMat::identity(rank) * value;
  return op;
}

SpectralOperator single_entry(long m0, long n0, const CRational& value,
                              long radius, int rank) {
  const long w = std::labs(m0 - n0);
  const long crossover = std::max(std::labs(m0), std::labs(n0));
  SpectralOperator op(rank, radius, w, crossover);
  op.block(n0, m0 - n0) = CMat::identity(rank) * value;
  return op;
}

SpectralOperator law_commutator(const EigenvalueLaw& law,
                                const SpectralOperator& a) {
  const long w = a.bandwidth();
  const long crossover = std::max(a.crossover(), w);
  SpectralOperator out(a.rank(), a.radius(), w, crossover);
  for (long n = -a.radius(); n <= a.radius(); ++n)
    for (long delta = -w; delta <= w; ++delta) {
      long m = n + delta;
      if (std::labs(m) > a.radius()) continue;
      const CMat& blk = a.block(n, delta);
      if (blk.is_zero()) continue;
      out.block(n, delta) = blk * CRational(law.lambda(m) - law.lambda(n));
    }
  CPoly lam;
  for (int i = 0; i <= law.order(); ++i)
    lam.add_coeff(i, CRational(law.p[i]));
  for (long delta = -w; delta <= w; ++delta) {
    // plus branch: lambda(n+delta) - lambda(n); minus: lambda(s-delta)-lambda(s)
    CPoly dplus = lam.shift(delta) - lam;
    CPoly dminus = lam.shift(-delta) - lam;
    for (int i = 0; i < a.rank(); ++i)
      for (int j = 0; j < a.rank(); ++j) {
        const CRatFunc& tp = a.tail(true, delta, i, j);
        if (!tp.is_zero())
          out.tail(true, delta, i, j) = tp * CRatFunc(dplus);
        const CRatFunc& tm = a.tail(false, delta, i, j);
        if (!tm.is_zero())
          out.tail(false, delta, i, j) = tm * CRatFunc(dminus);
      }
  }
  return out;
}

SpectralOperator multiply(const SpectralOperator& a,
                          const SpectralOperator& b) {
  if (a.rank() != b.rank()) throw Error("multiply: rank mismatch");
  const long radius = std::min(a.radius(), b.radius());
  const long w = a.bandwidth() + b.bandwidth();
  const long crossover =
      std::max(b.crossover(), a.crossover() + b.bandwidth());
  SpectralOperator out(a.rank(), radius, w, crossover);

  for (long n = -radius; n <= radius; ++n)
    for (long delta = -w; delta <= w; ++delta) {
      const long m = n + delta;
      if (std::labs(m) > radius) continue;
      CMat acc(a.rank());
      bool nz = false;
      const long klo = std::max(m - a.bandwidth(), n - b.bandwidth());
      const long khi = std::min(m + a.bandwidth(), n + b.bandwidth());
      for (long k = klo; k <= khi; ++k) {
        CMat am = a.entry(m, k);
        if (am.is_zero()) continue;
        CMat bk = b.entry(k, n);
        if (bk.is_zero()) continue;
        acc = acc + am * bk;
        nz = true;
      }
      if (nz) out.block(n, delta) = std::move(acc);
    }

  for (long delta = -w; delta <= w; ++delta)
    for (long d2 = -b.bandwidth(); d2 <= b.bandwidth(); ++d2) {
      const long d1 = delta - d2;
      if (std::labs(d1) > a.bandwidth()) continue;
      for (int i = 0; i < a.rank(); ++i)
        for (int j = 0; j < a.rank(); ++j)
          for (int k = 0; k < a.rank(); ++k) {
            const CRatFunc& fa_p = a.tail(true, d1, i, k);
            const CRatFunc& fb_p = b.tail(true, d2, k, j);
            if (!fa_p.is_zero() && !fb_p.is_zero()) {
              CRatFunc& slot = out.tail(true, delta, i, j);
              slot = slot + fa_p.shift(d2) * fb_p;
            }
            const CRatFunc& fa_m = a.tail(false, d1, i, k);
            const CRatFunc& fb_m = b.tail(false, d2, k, j);
            if (!fa_m.is_zero() && !fb_m.is_zero()) {
              CRatFunc& slot = out.tail(false, delta, i, j);
              slot = slot + fa_m.shift(-d2) * fb_m;
            }
          }
    }
  return out;
}

SpectralOperator add(const SpectralOperator& a, const SpectralOperator& b) {
  if (a.rank() != b.rank()) throw Error("add: rank mismatch");
  const long radius = std::min(a.radius(), b.radius());
  const long w = std::max(a.bandwidth(), b.bandwidth());
  const long crossover = std::max(a.crossover(), b.crossover());
  SpectralOperator out(a.rank(), radius, w, crossover);
  for (long n = -radius; n <= radius; ++n)
    for (long delta = -w; delta <= w; ++delta) {
      const long m = n + delta;
      if (std::labs(m) > radius) continue;
      CMat s = a.entry(m, n) + b.entry(m, n);
      if (!s.is_zero()) out.block(n, delta) = std::move(s);
    }
  for (long delta = -w; delta <= w; ++delta)
    for (int i = 0; i < a.rank(); ++i)
      for (int j = 0; j < a.rank(); ++j)
        for (int branch = 0; branch < 2; ++branch) {
          CRatFunc acc;
          if (std::labs(delta) <= a.bandwidth())
            acc = acc + a.tail(branch == 0, delta, i, j);
          if (std::labs(delta) <= b.bandwidth())
            acc = acc + b.tail(branch == 0, delta, i, j);
          if (!acc.is_zero()) out.tail(branch == 0, delta, i, j) = acc;
        }
  return out;
}

SpectralOperator scale(const SpectralOperator& a, const CRational& s) {
  SpectralOperator out(a.rank(), a.radius(), a.bandwidth(), a.crossover());
  for (long n = -a.radius(); n <= a.radius(); ++n)
    for (long delta = -a.bandwidth(); delta <= a.bandwidth(); ++delta) {
      long m = n + delta;
      if (std::labs(m) > a.radius()) continue;
      const CMat& blk = a.block(n, delta);
      if (!blk.is_zero()) out.block(n, delta) = blk * s;
    }
  for (long delta = -a.bandwidth(); delta <= a.bandwidth(); ++delta)
    for (int i = 0; i < a.rank(); ++i)
      for (int j = 0; j < a.rank(); ++j)
        for (int branch = 0; branch < 2; ++branch) {
          const CRatFunc& f = a.tail(branch == 0, delta, i, j);
          if (!f.is_zero()) out.tail(branch == 0, delta, i, j) = f * s;
        }
  return out;
}

SpectralOperator subtract(const SpectralOperator& a,
                          const SpectralOperator& b) {
  return add(a, scale(b, CRational(-1)));
}

}  // namespace reslab
