#include "reslab/weight.hpp"

#include <algorithm>

#include "reslab/errors.hpp"

namespace reslab {

void EigenvalueLaw::validate() const {
  if (p.empty() || order() < 1)
    throw NotElliptic("eigenvalue law needs positive order");
  const Rational& pq = p.back();
  if (pq <= 0) throw NotElliptic("eigenvalue law leading coefficient <= 0");
  // lambda(n) >= n^{q-1} (pq*n - sum|p_i|) beyond the crossover bound, so an
  // exact check up to it settles positivity for every integer n.
  Rational abs_sum(0);
  for (size_t i = 0; i + 1 < p.size(); ++i)
    abs_sum += (p[i] < 0 ? -p[i] : p[i]);
  long bound = 1 + static_cast<long>(to_double(abs_sum / pq));
  for (long n = 0; n <= bound; ++n)
    if (lambda(n) <= 0)
      throw NotElliptic("eigenvalue law not positive at |n|=" +
                        std::to_string(n));
}

ClassicalSymbol EigenvalueLaw::to_symbol(int rank) const {
  ClassicalSymbol s(rank);
  for (int d = 0; d <= order(); ++d) {
    if (p[d] == 0) continue;
    CRational c{p[d]};
    s.set_term(HomTerm(d, FpMatrix::identity(rank, c),
                       FpMatrix::identity(rank, c)));
  }
  return s;
}

EigenvalueLaw operator+(const EigenvalueLaw& a, const EigenvalueLaw& b) {
  EigenvalueLaw out;
  out.p.resize(std::max(a.p.size(), b.p.size()), Rational(0));
  for (size_t i = 0; i < a.p.size(); ++i) out.p[i] += a.p[i];
  for (size_t i = 0; i < b.p.size(); ++i) out.p[i] += b.p[i];
  return out;
}

EigenvalueLaw operator*(const EigenvalueLaw& a, const Rational& s) {
  EigenvalueLaw out = a;
  for (auto& v : out.p) v *= s;
  return out;
}

namespace {

// Extract the constant scalar coefficient of a matrix that must equal c*Id
// with c a real rational; throws otherwise.
Rational scalar_constant(const FpMatrix& m, const char* what) {
  const int r = m.rank();
  Rational c;
  bool have = false;
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < r; ++j) {
      const FourierPoly& f = m.at(i, j);
      if (i != j) {
        if (!f.is_zero())
          throw NotElliptic(std::string(what) + ": leading term not scalar");
        continue;
      }
      if (f.support_bound() != 0)
        throw NotElliptic(std::string(what) +
                          ": leading term depends on x (unsupported)");
      CRational v = f.coeff(0);
      if (!v.is_real())
        throw NotElliptic(std::string(what) + ": leading term not real");
      if (!have) {
        c = v.re;
        have = true;
      } else if (c != v.re) {
        throw NotElliptic(std::string(what) + ": leading term not scalar");
      }
    }
  if (!have) throw NotElliptic(std::string(what) + ": empty leading term");
  return c;
}

}  // namespace

Weight Weight::from_symbol(ClassicalSymbol sym, int order,
                           std::optional<EigenvalueLaw> law) {
  if (order <= 0) throw NotElliptic("weight order must be positive");
  Weight w;
  w.symbol = std::move(sym);
  w.q = order;
  w.law = std::move(law);
  if (w.symbol.order_bound() != order || !w.symbol.has_term(order))
    throw NotElliptic("weight symbol has no component at its stated order");
  auto [cp, cm] = w.leading();
  if (cp <= 0 || cm <= 0)
    throw NotElliptic("weight leading term must be positive");
  if (w.law) {
    w.law->validate();
    if (w.law->order() != order)
      throw NotElliptic("eigenvalue law order disagrees with weight order");
  }
  return w;
}

Weight Weight::from_law(const EigenvalueLaw& law, int rank) {
  law.validate();
  return from_symbol(law.to_symbol(rank), law.order(), law);
}

std::pair<Rational, Rational> Weight::leading() const {
  const HomTerm* t = symbol.term(q);
  if (!t) throw NotElliptic("weight has no leading term");
  return {scalar_constant(t->plus, "weight"),
          scalar_constant(t->minus, "weight")};
}

Weight default_weight(int rank) {
  EigenvalueLaw law;
  law.p = {Rational(1), Rational(0), Rational(1)};
  return Weight::from_law(law, rank);
}

ClassicalSymbol inverse(const Weight& Q, int floor) {
  auto [cp, cm] = Q.leading();
  const int rank = Q.symbol.rank();
  const int q = Q.q;
  CRational icp{Rational(1) / cp};
  CRational icm{Rational(1) / cm};

  ClassicalSymbol s(rank);
  s.set_term(HomTerm(-q, FpMatrix::identity(rank, icp),
                     FpMatrix::identity(rank, icm)));
  if (-q <= floor) return truncate(s, floor);

  const ClassicalSymbol id = ClassicalSymbol::identity(rank);
  for (int d = -q - 1; d > floor; --d) {
    // The residual at degree d+q is what the unknown component at degree d
    // must cancel through the leading term of Q.
    ClassicalSymbol prod;
    try {
      prod = compose(Q.symbol, s, d + q - 1);
    } catch (const FloorUnreachable& e) {
      throw InsufficientDepth(std::string("inverse: ") + e.what());
    }
    ClassicalSymbol resid = sub(id, prod);
    const HomTerm* r = resid.term(d + q);
    if (!r) continue;
    s.set_term(HomTerm(d, r->plus * icp, r->minus * icm));
  }
  s.set_valid_down_to(floor);
  return s;
}

ClassicalSymbol power_neg(const Weight& Q, int k, int floor) {
  if (k <= 0) throw OutOfRange("power_neg: k must be positive");
  const int q = Q.q;
  ClassicalSymbol inv = inverse(Q, floor + (k - 1) * q);
  ClassicalSymbol acc = inv;
  for (int i = 2; i <= k; ++i) acc = compose(acc, inv, floor + (k - i) * q);
  return acc;
}

ClassicalSymbol ad_power(const Weight& Q, const ClassicalSymbol& a, int j,
                         int floor) {
  if (j < 0) throw OutOfRange("ad_power: j must be nonnegative");
  ClassicalSymbol cur = a;
  for (int i = 1; i <= j; ++i) {
    const int fi = floor - (j - i) * Q.q;
    cur = sub(compose(Q.symbol, cur, fi), compose(cur, Q.symbol, fi));
    if (cur.is_zero()) return cur;
  }
  return cur;
}

}  // namespace reslab
