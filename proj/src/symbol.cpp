#include "reslab/symbol.hpp"

#include <algorithm>

#include "reslab/errors.hpp"

namespace reslab {

bool operator==(const ClassicalSymbol& a, const ClassicalSymbol& b) {
  if (a.rank() != b.rank() || a.valid_down_to() != b.valid_down_to())
    return false;
  if (a.terms().size() != b.terms().size()) return false;
  for (const auto& [d, t] : a.terms()) {
    const HomTerm* u = b.term(d);
    if (!u || !(u->plus == t.plus) || !(u->minus == t.minus)) return false;
  }
  return true;
}

bool symbol_terms_equal(const ClassicalSymbol& a, const ClassicalSymbol& b,
                        int above_floor) {
  int top = std::max(a.order_bound(), b.order_bound());
  for (int d = above_floor + 1; d <= top; ++d) {
    const HomTerm* ta = a.term(d);
    const HomTerm* tb = b.term(d);
    if (!ta && !tb) continue;
    FpMatrix zp(a.rank());
    const FpMatrix& ap = ta ? ta->plus : zp;
    const FpMatrix& am = ta ? ta->minus : zp;
    const FpMatrix& bp = tb ? tb->plus : zp;
    const FpMatrix& bm = tb ? tb->minus : zp;
    if (!(ap == bp) || !(am == bm)) return false;
  }
  return true;
}

ClassicalSymbol add(const ClassicalSymbol& a, const ClassicalSymbol& b) {
  if (a.rank() != b.rank()) throw Error("add: rank mismatch");
  ClassicalSymbol out(a.rank());
  int vdt = std::max(a.valid_down_to(), b.valid_down_to());
  vdt = std::min(vdt, std::max(a.order_bound(), b.order_bound()));
  out.set_valid_down_to(vdt);
  for (const auto& [d, t] : a.terms()) {
    if (d <= vdt) continue;
    if (const HomTerm* u = b.term(d)) {
      out.set_term(HomTerm(d, t.plus + u->plus, t.minus + u->minus));
    } else {
      out.set_term(t);
    }
  }
  for (const auto& [d, u] : b.terms()) {
    if (d <= vdt || a.has_term(d)) continue;
    out.set_term(u);
  }
  return out;
}

ClassicalSymbol sub(const ClassicalSymbol& a, const ClassicalSymbol& b) {
  return add(a, scale(b, CRational(-1)));
}

ClassicalSymbol scale(const ClassicalSymbol& a, const CRational& s) {
  ClassicalSymbol out(a.rank());
  out.set_valid_down_to(a.valid_down_to());
  if (s.is_zero()) {
    // Unknown degrees stay unknown even when scaled by zero is the pedantic
    // reading, but 0*unknown = 0: the result is exactly zero.
    out.set_valid_down_to(kNegInfDeg);
    return out;
  }
  for (const auto& [d, t] : a.terms())
    out.set_term(HomTerm(d, t.plus * s, t.minus * s));
  return out;
}

ClassicalSymbol truncate(const ClassicalSymbol& a, int floor) {
  ClassicalSymbol out(a.rank());
  out.set_valid_down_to(
      std::min(std::max(a.valid_down_to(), floor), a.order_bound()));
  for (const auto& [d, t] : a.terms())
    if (d > floor) out.set_term(t);
  return out;
}

ClassicalSymbol derivative_xi(const ClassicalSymbol& a) {
  ClassicalSymbol out(a.rank());
  out.set_valid_down_to(a.valid_down_to() == kNegInfDeg
                            ? kNegInfDeg
                            : a.valid_down_to() - 1);
  for (const auto& [d, t] : a.terms()) {
    CRational dd{Rational(d)};
    out.set_term(HomTerm(d - 1, t.plus * dd, t.minus * (-dd)));
  }
  return out;
}

ClassicalSymbol derivative_x_symbol(const ClassicalSymbol& a) {
  ClassicalSymbol out(a.rank());
  out.set_valid_down_to(a.valid_down_to());
  for (const auto& [d, t] : a.terms())
    out.set_term(HomTerm(d, derivative_x(t.plus), derivative_x(t.minus)));
  return out;
}

ClassicalSymbol compose(const ClassicalSymbol& a, const ClassicalSymbol& b,
                        int floor) {
  if (a.rank() != b.rank()) throw Error("compose: rank mismatch");
  const int rank = a.rank();
  if (a.is_zero() || b.is_zero()) return ClassicalSymbol::zero(rank);

  // Unknown content of one operand meets the top of the other at these
  // levels; everything above is exact.
  const int cert = std::max(deg_add(a.valid_down_to(), b.order_bound()),
                            deg_add(a.order_bound(), b.valid_down_to()));

  // Pairwise termination: polynomial left factor (dxi eventually kills it)
  // or x-independent right factor (Dx kills it).
  bool finite_expansion =
      a.valid_down_to() == kNegInfDeg && b.valid_down_to() == kNegInfDeg;
  if (finite_expansion) {
    for (const auto& [da, ta] : a.terms()) {
      if (da >= 0) continue;
      for (const auto& [db, tb] : b.terms()) {
        if (derivative_x(tb.plus).is_zero() &&
            derivative_x(tb.minus).is_zero())
          continue;
        finite_expansion = false;
        break;
      }
      if (!finite_expansion) break;
    }
  }

  if (!finite_expansion && cert > floor)
    throw FloorUnreachable("compose: certified floor " + std::to_string(cert) +
                           " above requested " + std::to_string(floor));

  int lo = floor + 1;
  if (finite_expansion) {
    // Lowest degree a terminating expansion can reach.
    int lo_exact = 0;
    bool first = true;
    for (const auto& [da, ta] : a.terms())
      for (const auto& [db, tb] : b.terms()) {
        int pair_lo = (da >= 0) ? db : da + db;
        if (first || pair_lo < lo_exact) lo_exact = pair_lo;
        first = false;
      }
    lo = std::min(lo, lo_exact);
  }

  std::map<int, HomTerm> acc;
  auto slot = [&](int d) -> HomTerm& {
    auto it = acc.find(d);
    if (it == acc.end())
      it = acc.emplace(d, HomTerm(d, FpMatrix(rank), FpMatrix(rank))).first;
    return it->second;
  };

  for (const auto& [db, tb] : b.terms()) {
    FpMatrix dxb_plus = tb.plus;
    FpMatrix dxb_minus = tb.minus;
    Rational inv_fact(1);
    const int alpha_max = a.order_bound() + db - lo;
    for (int alpha = 0; alpha <= alpha_max; ++alpha) {
      if (alpha > 0) {
        dxb_plus = derivative_x(dxb_plus);
        dxb_minus = derivative_x(dxb_minus);
        if (dxb_plus.is_zero() && dxb_minus.is_zero()) break;
        inv_fact /= alpha;
      }
      for (const auto& [da, ta] : a.terms()) {
        const int d = da + db - alpha;
        if (d < lo) continue;
        // falling factorial da*(da-1)*...*(da-alpha+1)
        Rational fall(1);
        for (int i = 0; i < alpha; ++i) fall *= (da - i);
        if (fall == 0) continue;
        CRational cp{fall * inv_fact};
        CRational cm = (alpha % 2 == 0) ? cp : -cp;
        HomTerm& out = slot(d);
        out.plus = out.plus + (ta.plus * dxb_plus) * cp;
        out.minus = out.minus + (ta.minus * dxb_minus) * cm;
      }
    }
  }

  ClassicalSymbol out(rank);
  // Degrees above the operand order sum cannot carry content, so a floor
  // sitting above it still certifies everything down to that sum.
  const int content_cap = deg_add(a.order_bound(), b.order_bound());
  out.set_valid_down_to(finite_expansion ? kNegInfDeg
                                         : std::min(floor, content_cap));
  for (auto& [d, t] : acc) out.set_term(std::move(t));
  return out;
}

CRational wodzicki_residue(const ClassicalSymbol& a) {
  if (a.is_zero()) return CRational();
  if (a.valid_down_to() >= -kDimM)
    throw InsufficientDepth(
        "wodzicki_residue: degree " + std::to_string(-kDimM) +
        " not certified (floor " + std::to_string(a.valid_down_to()) + ")");
  const HomTerm* t = a.term(-kDimM);
  if (!t) return CRational();
  FourierPoly f = t->plus.trace() + t->minus.trace();
  return f.eval_mean();
}

ClassicalSymbol sym_monomial(int degree, long freq, const CRational& plus,
                             const CRational& minus) {
  ClassicalSymbol s(1);
  FpMatrix p(1), m(1);
  p.at(0, 0) = FourierPoly::harmonic(freq, plus);
  m.at(0, 0) = FourierPoly::harmonic(freq, minus);
  s.set_term(HomTerm(degree, std::move(p), std::move(m)));
  return s;
}

ClassicalSymbol sym_xi_power(int degree) {
  bool odd = ((degree % 2) + 2) % 2 == 1;
  return sym_monomial(degree, 0, CRational(1), odd ? CRational(-1)
                                                   : CRational(1));
}

ClassicalSymbol sym_abs_xi_power(int degree) {
  return sym_monomial(degree, 0, CRational(1), CRational(1));
}

}  // namespace reslab
