#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "reslab/anomaly.hpp"
#include "reslab/heat.hpp"
#include "reslab/spectral.hpp"
#include "reslab/zeta.hpp"

using namespace reslab;

namespace {

ClassicalSymbol shift_symbol(long freq) {
  return sym_monomial(0, freq, CRational(1), CRational(1));
}

EigenvalueLaw default_law() {
  EigenvalueLaw law;
  law.p = {Rational(1), Rational(0), Rational(1)};
  return law;
}

}  // namespace

TEST_CASE("quantize: diagonal, shift and mixed conventions") {
  SUBCASE("Op(xi) is the frequency multiplier") {
    SpectralOperator op = quantize(sym_xi_power(1), 8);
    for (long n = -8; n <= 8; ++n)
      CHECK(op.entry(n, n).at(0, 0) == CRational(Rational(n)));
    CHECK(op.entry(3, 2).is_zero());
  }
  SUBCASE("Op(e^{ix}) shifts by one") {
    SpectralOperator op = quantize(shift_symbol(1), 8);
    for (long n = -7; n <= 7; ++n) {
      CHECK(op.entry(n + 1, n).at(0, 0) == CRational(1));
      CHECK(op.entry(n, n).is_zero());
    }
  }
  SUBCASE("Op(e^{ix} xi) has entries A_{n+1,n} = n") {
    ClassicalSymbol s = sym_monomial(1, 1, CRational(1), CRational(-1));
    SpectralOperator op = quantize(s, 8);
    for (long n = -7; n <= 7; ++n)
      CHECK(op.entry(n + 1, n).at(0, 0) == CRational(Rational(n)));
  }
  SUBCASE("negative degrees vanish at n = 0") {
    SpectralOperator op = quantize(sym_abs_xi_power(-1), 8);
    CHECK(op.entry(0, 0).is_zero());
    CHECK(op.entry(3, 3).at(0, 0) == CRational(Rational(1, 3)));
  }
  SUBCASE("tail rule matches materialized entries") {
    ClassicalSymbol s = add(sym_monomial(2, 1, CRational(1), CRational(2)),
                            sym_abs_xi_power(-2));
    SpectralOperator op = quantize(s, 12);
    for (long n : {5L, 9L, -7L, -11L}) {
      CMat inside = op.entry(n + 1, n);
      // evaluate through the tail by asking beyond the radius equivalent:
      const CRatFunc& f = op.tail(n > 0, 1, 0, 0);
      CHECK(inside.at(0, 0) == f.eval(Rational(std::labs(n))));
    }
  }
}

TEST_CASE("matrix product consistency with symbol composition (asymptotic)") {
  // Beyond the certified floor the quantized composition and the exact
  // matrix product agree up to O(n^{floor}).
  ClassicalSymbol a = sym_monomial(1, 1, CRational(1), CRational(-1));
  ClassicalSymbol b = add(sym_abs_xi_power(1),
                          sym_monomial(0, -1, CRational(1), CRational(1)));
  SpectralOperator pa = quantize(a, 16);
  SpectralOperator pb = quantize(b, 16);
  SpectralOperator prod = multiply(pa, pb);

  const int floor = -4;
  ClassicalSymbol comp = compose(a, b, floor);
  // quantize the known components of the truncated composition
  ClassicalSymbol comp_exact(comp.rank());
  for (const auto& [d, t] : comp.terms()) comp_exact.set_term(t);
  SpectralOperator pc = quantize(comp_exact, 16);

  double prev_ratio = 0.0;
  for (long n : {64L, 128L, 256L}) {
    CRational diff =
        prod.entry(n + 1, n).at(0, 0) - pc.entry(n + 1, n).at(0, 0);
    double mag = std::abs(diff.to_complex());
    double bound = std::pow(static_cast<double>(n), floor);
    CHECK(mag <= 8.0 * bound);
    prev_ratio = mag / bound;
    (void)prev_ratio;
  }
}

TEST_CASE("heat_trace anchors") {
  EigenvalueLaw law = default_law();
  SUBCASE("identity at t = 1") {
    SpectralOperator id = identity_operator(1, 32);
    ValueErr v = heat_trace(law, id, 1.0);
    // direct summation: e^{-1} + 2e^{-2} + 2e^{-5} + 2e^{-10} + ...
    double direct = std::exp(-1.0);
    for (long n = 1; n <= 12; ++n) direct += 2.0 * std::exp(-(1.0 + n * n));
    CHECK(direct == doctest::Approx(0.6521167842).epsilon(1e-9));
    CHECK(v.value.real() == doctest::Approx(direct).epsilon(1e-13));
    CHECK(std::abs(v.value.imag()) < 1e-15);
  }
  SUBCASE("rank-one diagonal at n = 0") {
    SpectralOperator r1 = rank_one_diag(0, CRational(1), 16);
    ValueErr v = heat_trace(law, r1, 1.0);
    CHECK(v.value.real() == doctest::Approx(std::exp(-1.0)).epsilon(1e-14));
  }
  SUBCASE("strictly decreasing in t for positive diagonal") {
    SpectralOperator id = identity_operator(1, 32);
    double prev = heat_trace(law, id, 0.5).value.real();
    for (double t : {0.7, 1.0, 1.5, 2.5}) {
      double cur = heat_trace(law, id, t).value.real();
      CHECK(cur < prev);
      prev = cur;
    }
  }
}

TEST_CASE("simplex_heat_kernel anchors and properties") {
  SUBCASE("coincident pair collapses to the heat factor") {
    std::vector<double> nodes{1.7, 1.7};
    CHECK(simplex_heat_kernel(nodes, 0.9) ==
          doctest::Approx(std::exp(-0.9 * 1.7)).epsilon(1e-13));
  }
  SUBCASE("distinct pair: closed-form divided difference") {
    std::vector<double> nodes{1.0, 2.0};
    CHECK(simplex_heat_kernel(nodes, 1.0) ==
          doctest::Approx(std::exp(-1.0) - std::exp(-2.0)).epsilon(1e-13));
    CHECK(simplex_heat_kernel(nodes, 1.0) ==
          doctest::Approx(0.2325442).epsilon(1e-6));
  }
  SUBCASE("three zero nodes give the simplex volume") {
    std::vector<double> nodes{0.0, 0.0, 0.0};
    CHECK(simplex_heat_kernel(nodes, 1.0) == doctest::Approx(0.5).epsilon(1e-14));
  }
  SUBCASE("symmetric under permutation, continuous at collisions") {
    std::vector<double> a{3.0, 1.0, 2.0};
    std::vector<double> b{1.0, 2.0, 3.0};
    CHECK(simplex_heat_kernel(a, 0.8) ==
          doctest::Approx(simplex_heat_kernel(b, 0.8)).epsilon(1e-14));
    std::vector<double> near{2.0, 2.0 + 1e-9, 5.0};
    std::vector<double> at{2.0, 2.0, 5.0};
    CHECK(std::abs(simplex_heat_kernel(near, 0.8) -
                   simplex_heat_kernel(at, 0.8)) < 1e-9);
  }
  SUBCASE("positivity") {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(0.0, 30.0);
    for (int iter = 0; iter < 20; ++iter) {
      std::vector<double> nodes{u(rng), u(rng), u(rng), u(rng)};
      CHECK(simplex_heat_kernel(nodes, 0.7) > 0.0);
    }
  }
}

TEST_CASE("jlo_value: collapses and reductions") {
  EigenvalueLaw law = default_law();
  SUBCASE("n = 0 reduces to the heat trace") {
    SpectralOperator a = quantize(sym_abs_xi_power(1), 24);
    std::vector<SpectralOperator> ops{a};
    ValueErr jlo = jlo_value(law, ops, 0.9, 24);
    ValueErr ht = heat_trace(law, a, 0.9);
    CHECK(jlo.value.real() == doctest::Approx(ht.value.real()).epsilon(1e-12));
  }
  SUBCASE("n = 2 identities give half the heat trace") {
    SpectralOperator id = identity_operator(1, 24);
    std::vector<SpectralOperator> ops{id, id, id};
    ValueErr jlo = jlo_value(law, ops, 0.7, 24);
    ValueErr ht = heat_trace(law, id, 0.7);
    CHECK(jlo.value.real() ==
          doctest::Approx(0.5 * ht.value.real()).epsilon(1e-12));
  }
  SUBCASE("n = 1 diagonal pair reduces to a plain heat sum") {
    SpectralOperator d1 = quantize(sym_xi_power(1), 24);
    SpectralOperator d2 = quantize(sym_abs_xi_power(1), 24);
    std::vector<SpectralOperator> ops{d1, d2};
    ValueErr jlo = jlo_value(law, ops, 1.1, 24);
    double direct = 0.0;
    for (long n = -60; n <= 60; ++n)
      direct += static_cast<double>(n) * std::labs(n) *
                std::exp(-1.1 * to_double(law.lambda(n)));
    CHECK(jlo.value.real() == doctest::Approx(direct).epsilon(1e-10));
  }
}

TEST_CASE("jlo cyclicity") {
  EigenvalueLaw law = default_law();
  SpectralOperator e1 = quantize(shift_symbol(1), 24);
  SpectralOperator em1 = quantize(shift_symbol(-1), 24);
  SpectralOperator ax = quantize(sym_monomial(1, 1, CRational(1), CRational(-1)), 24);
  std::vector<SpectralOperator> abc{e1, em1, ax};
  std::vector<SpectralOperator> bca{em1, ax, e1};
  std::vector<SpectralOperator> cab{ax, e1, em1};
  double t = 0.7;
  double v0 = jlo_value(law, abc, t, 24).value.real();
  double v1 = jlo_value(law, bca, t, 24).value.real();
  double v2 = jlo_value(law, cab, t, 24).value.real();
  CHECK(std::abs(v0 - v1) < 1e-9 * (1.0 + std::abs(v0)));
  CHECK(std::abs(v0 - v2) < 1e-9 * (1.0 + std::abs(v0)));
}

TEST_CASE("zeta_trace_germ anchors") {
  EigenvalueLaw law = default_law();
  SUBCASE("identity: pole 0, finite part 0") {
    ZetaGerm g = zeta_trace_germ(law, identity_operator(1, 40));
    CHECK(std::abs(g.germ.pole) < 1e-12);
    CHECK(std::abs(g.germ.konst) < 1e-11);
    CHECK(g.err < 1e-9);
  }
  SUBCASE("Op(|xi|): finite part -7/6") {
    ZetaGerm g = zeta_trace_germ(law, quantize(sym_abs_xi_power(1), 40));
    CHECK(std::abs(g.germ.pole) < 1e-12);
    CHECK(g.germ.konst.real() ==
          doctest::Approx(-7.0 / 6.0).epsilon(1e-11));
  }
  SUBCASE("Op(|xi|) Q^{-1}: pole 1") {
    SpectralOperator c = multiply(quantize(sym_abs_xi_power(1), 40),
                                  diagonal_law_power(law, -1, 40));
    ZetaGerm g = zeta_trace_germ(law, c);
    CHECK(g.germ.pole.real() == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("weighted_trace: trace-class consistency") {
  EigenvalueLaw law = default_law();
  SUBCASE("rank-one diagonal is an ordinary trace") {
    ValueErr v = weighted_trace(law, rank_one_diag(0, CRational(1), 40));
    CHECK(v.value.real() == doctest::Approx(1.0).epsilon(1e-12));
  }
  SUBCASE("sum of (1+n^2)^{-1} equals pi coth pi") {
    ValueErr v = weighted_trace(law, diagonal_law_power(law, -1, 40));
    const double expect = M_PI / std::tanh(M_PI);
    CHECK(v.value.real() == doctest::Approx(expect).epsilon(1e-11));
    // direct absolutely-convergent summation agrees
    double direct = 0.0;
    for (long n = 2000000; n >= 1; --n)
      direct += 2.0 / (1.0 + static_cast<double>(n) * n);
    direct += 1.0;
    CHECK(std::abs(v.value.real() - direct) < 1e-5);
  }
}

TEST_CASE("pole law: zeta pole equals the mellin residue") {
  EigenvalueLaw law = default_law();
  Weight Q = Weight::from_law(law);
  struct Fixture {
    ClassicalSymbol sym;
  };
  std::vector<ClassicalSymbol> fixtures{
      sym_abs_xi_power(-1),
      sym_xi_power(-1),
      add(sym_abs_xi_power(1), sym_abs_xi_power(-1)),
      sym_monomial(-1, 2, CRational(1), CRational(1)),  // off-diagonal: res 0
  };
  for (const auto& s : fixtures) {
    ZetaGerm g = zeta_trace_germ(law, quantize(s, 40));
    std::vector<ClassicalSymbol> one{s};
    CRational mr = mellin_residue(Q, one);
    CHECK(std::abs(g.germ.pole - mr.to_complex()) < 1e-9);
  }
}

TEST_CASE("duhamel_check") {
  EigenvalueLaw law = default_law();
  SUBCASE("identity and diagonal operators commute") {
    CHECK(duhamel_check(law, identity_operator(1, 16), 0.7) == 0.0);
    CHECK(duhamel_check(law, quantize(sym_xi_power(1), 16), 1.0) == 0.0);
  }
  SUBCASE("shift fixture stays below 1e-10 with 64 nodes") {
    SpectralOperator e1 = quantize(shift_symbol(1), 24);
    CHECK(duhamel_check(law, e1, 0.3, 64) < 1e-10);
    CHECK(duhamel_check(law, e1, 1.0, 64) < 1e-10);
  }
}

TEST_CASE("b_jlo_check: even and odd identities") {
  EigenvalueLaw law = default_law();
  SpectralOperator e1 = quantize(shift_symbol(1), 24);
  SpectralOperator em1 = quantize(shift_symbol(-1), 24);
  SpectralOperator id = identity_operator(1, 24);
  SUBCASE("p = 0 with an identity slot vanishes on both sides") {
    std::vector<SpectralOperator> ops{e1, id};
    BJloReport rep = b_jlo_check(law, ops, 0.7, 16);
    CHECK(std::abs(rep.lhs.value) < 1e-12);
    CHECK(std::abs(rep.rhs.value) < 1e-12);
  }
  SUBCASE("p = 0 diagonal pair: everything commutes") {
    std::vector<SpectralOperator> ops{quantize(sym_xi_power(1), 24),
                                      quantize(sym_abs_xi_power(1), 24)};
    BJloReport rep = b_jlo_check(law, ops, 0.7, 16);
    CHECK(std::abs(rep.lhs.value) < 1e-12);
    CHECK(rep.deviation < 1e-12);
  }
  SUBCASE("p = 0 mixed pair satisfies the identity and is nondegenerate") {
    SpectralOperator b =
        quantize(sym_monomial(1, -1, CRational(1), CRational(1)), 24);
    std::vector<SpectralOperator> ops{e1, b};
    BJloReport rep = b_jlo_check(law, ops, 0.7, 16);
    CHECK(rep.deviation < 1e-8 * (1.0 + std::abs(rep.lhs.value)));
    CHECK(std::abs(rep.lhs.value) > 1e-3);
  }
  SUBCASE("odd case (n = 1) with wrap-around term") {
    std::vector<SpectralOperator> ops{e1, em1, id};
    BJloReport rep = b_jlo_check(law, ops, 0.7, 16);
    CHECK(rep.deviation < 1e-8 * (1.0 + std::abs(rep.lhs.value)));
    CHECK(std::abs(rep.lhs.value) > 1e-3);
  }
  SUBCASE("odd case (n = 1), nondegenerate mixed tuple") {
    SpectralOperator ax =
        quantize(sym_monomial(1, -1, CRational(1), CRational(1)), 24);
    std::vector<SpectralOperator> ops{e1, ax, id};
    BJloReport rep = b_jlo_check(law, ops, 0.7, 16);
    CHECK(rep.deviation < 1e-8 * (1.0 + std::abs(rep.lhs.value)));
  }
}

TEST_CASE("basicformula_check: expansion convention discrimination") {
  EigenvalueLaw law = default_law();
  SpectralOperator id = identity_operator(1, 32);
  SUBCASE("n = 0 is the heat trace itself") {
    std::vector<SpectralOperator> ops{id};
    std::vector<double> grid{0.5, 0.25};
    BasicFormulaReport rep = basicformula_check(
        law, ops, grid, 0, CoefficientConvention::kExact, 24);
    for (const auto& row : rep.rows) CHECK(row.residual < 1e-12);
  }
  SUBCASE("n = 2 identities at depth 0 split the conventions") {
    std::vector<SpectralOperator> ops{id, id, id};
    std::vector<double> grid{0.7};
    BasicFormulaReport ex = basicformula_check(
        law, ops, grid, 0, CoefficientConvention::kExact, 20);
    BasicFormulaReport pa = basicformula_check(
        law, ops, grid, 0, CoefficientConvention::kPaper, 20);
    double ht = heat_trace(law, id, 0.7).value.real();
    CHECK(ex.rows[0].residual < 1e-12 * ht);
    CHECK(pa.rows[0].residual ==
          doctest::Approx(0.5 * ht).epsilon(1e-10));
  }
  SUBCASE("n = 1 two-level pair: residual slope reaches depth + 1") {
    // Single (0,1)/(1,0) entries with lambda(0) small: the remainder is
    // exactly e^{-t lambda(0)} t^3/24 (1 - t/5 + ...), a clean cubic.
    EigenvalueLaw soft;
    soft.p = {Rational(1, 100), Rational(0), Rational(1)};
    std::vector<SpectralOperator> ops{single_entry(0, 1, CRational(1), 40),
                                      single_entry(1, 0, CRational(1), 40)};
    std::vector<double> grid{0.4, 0.2, 0.1, 0.05};
    BasicFormulaReport rep = basicformula_check(
        soft, ops, grid, 2, CoefficientConvention::kExact, 40);
    CHECK(rep.slope == doctest::Approx(3.0).epsilon(0.1));
  }
}

TEST_CASE("rank 2 operators flow through the oracle") {
  EigenvalueLaw law = default_law();
  Weight Q = Weight::from_law(law, 2);
  // off-diagonal block symbol: order 1 on the (0,1) entry, shifts on (1,0)
  ClassicalSymbol s(2);
  {
    FpMatrix p(2), m(2);
    p.at(0, 1) = FourierPoly(CRational(1));
    m.at(0, 1) = FourierPoly(CRational(1));
    p.at(1, 0) = FourierPoly::harmonic(1);
    m.at(1, 0) = FourierPoly::harmonic(1);
    s.set_term(HomTerm(1, std::move(p), std::move(m)));
  }
  {
    FpMatrix p(2), m(2);
    p.at(0, 0) = FourierPoly(CRational(1));
    m.at(0, 0) = FourierPoly(CRational(1));
    s.set_term(HomTerm(-1, std::move(p), std::močve(m)));
  }
  SpectralOperator op = quantize(s, 40);
  ZetaGerm g = zeta_trace_germ(law, op);
  std::vector<ClassicalSymbol> one{s};
  CRational mr = mellin_residue(Q, one);
  CHECK(std::abs(g.germ.pole - mr.to_complex()) < 1e-9);
  CHECK(mr == CRational(1));  // tr of the degree -1 block is |xi|^{-1}
  ValueErr ht = heat_trace(law, op, 0.9);
  CHECK(std::isfinite(ht.value.real()));
}

TEST_CASE("trace provider wiring: weighted cochain against the oracle") {
  EigenvalueLaw law = default_law();
  Weight Q = Weight::from_law(law);
  TraceProvider provider = [&](std::span<const ClassicalSymbol> factors) {
    SpectralOperator acc = quantize(factors[0], 40);
    for (size_t i = 1; i < factors.size(); ++i)
      acc = multiply(acc, quantize(factors[i], 40));
    ValueErr v = weighted_trace(law, acc);
    return std::pair<std::complex<double>, double>{v.value, v.err};
  };
  SUBCASE("chi_0(I) = tr^Q(I) = 0") {
    std::vector<ClassicalSymbol> ops{ClassicalSymbol::identity(1)};
    CochainValue v =
        weighted_cochain(Q, ops, provider, CoefficientConvention::kExact);
    CHECK(std::abs(v.value) < 1e-10);
  }
  SUBCASE("chi_1(I, I) = 0 with vanishing corrections") {
    std::vector<ClassicalSymbol> ops{ClassicalSymbol::identity(1),
                                     ClassicalSymbol::identity(1)};
    CochainValue v =
        weighted_cochain(Q, ops, provider, CoefficientConvention::kExact);
    CHECK(std::abs(v.value) < 1e-10);
  }
  SUBCASE("cyclicity of the finite part: chi_1(A,B) = chi_1(B,A)") {
    ClassicalSymbol A = shift_symbol(1);
    ClassicalSymbol B = sym_monomial(1, -1, CRational(1), CRational(1));
    std::vector<ClassicalSymbol> ab{A, B};
    std::vector<ClassicalSymbol> ba{B, A};
    CochainValue vab =
        weighted_cochain(Q, ab, provider, CoefficientConvention::kExact);
    CochainValue vba =
        weighted_cochain(Q, ba, provider, CoefficientConvention::kExact);
    CHECK(std::abs(vab.value - vba.value) <=
          vab.err + vba.err + 1e-9);
  }
  SUBCASE("cyclicity extends to chi_2 with the anchored exact constants") {
    ClassicalSymbol A = shift_symbol(1);
    ClassicalSymbol B = sym_monomial(1, -1, CRational(1), CRational(1));
    ClassicalSymbol C = compose(sym_monomial(1, 1, CRational(1), CRational(-1)),
                                shift_symbol(-1), -10);
    std::vector<ClassicalSymbol> abc{A, B, C};
    std::vector<ClassicalSymbol> cab{C, A, B};
    std::vector<ClassicalSymbol> bca{B, C, A};
    CochainValue v0 =
        weighted_cochain(Q, abc, provider, CoefficientConvention::kExact);
    CochainValue v1 =
        weighted_cochain(Q, cab, provider, CoefficientConvention::kExact);
    CochainValue v2 =
        weighted_cochain(Q, bca, provider, CoefficientConvention::kExact);
    CHECK(std::abs(v0.value - v1.value) <= v0.err + v1.err + 1e-9);
    CHECK(std::abs(v0.value - v2.value) <= v0.err + v2.err + 1e-9);
  }
}
