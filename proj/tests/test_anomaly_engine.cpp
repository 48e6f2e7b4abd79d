#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "reslab/anomaly.hpp"

using namespace reslab;

namespace {

std::mt19937_64 rng(91203);

ClassicalSymbol shift_symbol(long freq) {
  return sym_monomial(0, freq, CRational(1), CRational(1));
}

ClassicalSymbol shift_times_xi(long freq) {  // Op(e^{i freq x} xi)
  return sym_monomial(1, freq, CRational(1), CRational(-1));
}

CRational random_coeff() {
  std::uniform_int_distribution<int> num(-3, 3);
  std::uniform_int_distribution<int> den(1, 3);
  return {Rational(num(rng), den(rng)), Rational(num(rng), den(rng))};
}

ClassicalSymbol random_symbol(int min_order, int max_order) {
  std::uniform_int_distribution<int> ord(min_order, max_order);
  std::uniform_int_distribution<long> freq(-2, 2);
  ClassicalSymbol s(1);
  int top = ord(rng);
  FpMatrix p(1), m(1);
  p.at(0, 0).add_coeff(freq(rng), random_coeff());
  m.at(0, 0).add_coeff(freq(rng), random_coeff());
  s.set_term(HomTerm(top, std::move(p), std::move(m)));
  return s;
}

// 2x2 exact rational matrices over CRational, the abstract algebra for the
// numeric Hochschild tables.
struct Mat2 {
  CRational a, b, c, d;
  friend Mat2 operator*(const Mat2& x, const Mat2& y) {
    return {x.a * y.a + x.b * y.c, x.a * y.b + x.b * y.d,
            x.c * y.a + x.d * y.c, x.c * y.b + x.d * y.d};
  }
};

Mat2 random_mat2() {
  return {random_coeff(), random_coeff(), random_coeff(), random_coeff()};
}

}  // namespace

TEST_CASE("simplex_constant: anchors and the documented discrepancy") {
  SimplexConstant c1 = simplex_constant(MultiIndex{{1}});
  CHECK(c1.value_exact == Rational(1, 2));
  CHECK(c1.value_paper == Rational(1, 2));

  SimplexConstant c0 = simplex_constant(MultiIndex{{0}});
  CHECK(c0.value_exact == Rational(1));

  SimplexConstant c00 = simplex_constant(MultiIndex{{0, 0}});
  CHECK(c00.value_exact == Rational(1, 2));  // simplex volume
  CHECK(c00.value_paper == Rational(1));     // printed closed form
}

TEST_CASE("conventions agree on every single-slot multiindex") {
  for (int k = 0; k <= 6; ++k) {
    MultiIndex mi{{k}};
    CHECK(expansion_coefficient(mi, CoefficientConvention::kExact) ==
          expansion_coefficient(mi, CoefficientConvention::kPaper));
  }
}

TEST_CASE("correction_sum: trivial cases") {
  Weight Q = default_weight();
  SUBCASE("n = 0 has no multiindex slots") {
    std::vector<ClassicalSymbol> ops{sym_abs_xi_power(1)};
    CHECK(correction_sum(Q, ops, CoefficientConvention::kExact) ==
          CRational(0));
  }
  SUBCASE("Fourier multipliers commute with the weight") {
    std::vector<ClassicalSymbol> ops{sym_abs_xi_power(1), sym_abs_xi_power(1)};
    CHECK(correction_sum(Q, ops, CoefficientConvention::kExact) ==
          CRational(0));
  }
}

TEST_CASE("correction_sum: n = 1 mixed fixture against a hand-built sum") {
  // Frequencies must cancel inside the residue, so pair e^{-ix}|xi| with
  // e^{ix} xi.
  Weight Q = default_weight();
  ClassicalSymbol a0 = sym_monomial(1, -1, CRational(1), CRational(1));
  ClassicalSymbol a1 = shift_times_xi(1);
  std::vector<ClassicalSymbol> ops{a0, a1};
  CRational got = correction_sum(Q, ops, CoefficientConvention::kExact);

  // Independent assembly of the same formula, term by term: |a| = 2, so
  // |k| runs over {1, 2, 3}; D(k) = 1/(k+1)! for a single slot.
  CRational want;
  for (int k = 1; k <= 3; ++k) {
    ClassicalSymbol adk = ad_power(Q, a1, k, -2 - 2 * k - 4);
    ClassicalSymbol qk = power_neg(Q, k, -2 - a0.order_bound() -
                                             adk.order_bound() - 1);
    ClassicalSymbol prod =
        compose(compose(a0, adk, -2 + k * 2), qk, -2);
    Rational coeff = Rational(k % 2 == 0 ? 1 : -1) * factorial(k - 1) /
                     (factorial(k + 1) * Rational(Q.q));
    want += wodzicki_residue(prod) * CRational(coeff);
  }
  CHECK(got == want);
  CHECK(!got.is_zero());

  SUBCASE("term table rows multiply out to the total") {
    TermTable table;
    CRational total =
        correction_sum(Q, ops, CoefficientConvention::kExact, &table);
    CRational sum;
    for (const auto& row : table) sum += row.residue * CRational(row.coeff);
    CHECK(sum == total);
    CHECK(table.size() == 3);
  }
}

TEST_CASE("mellin_residue: anchors") {
  Weight Q = default_weight();
  SUBCASE("identity tuple gives zero") {
    std::vector<ClassicalSymbol> ops{ClassicalSymbol::identity(1),
                                     ClassicalSymbol::identity(1)};
    CHECK(mellin_residue(Q, ops) == CRational(0));
  }
  SUBCASE("order below the residue threshold gives zero") {
    std::vector<ClassicalSymbol> ops{sym_abs_xi_power(-1),
                                     sym_abs_xi_power(-1)};
    CHECK(mellin_residue(Q, ops) == CRational(0));
  }
  SUBCASE("|D| Q^{-1} has unit mellin residue") {
    std::vector<ClassicalSymbol> ops{sym_abs_xi_power(1), inverse(Q, -4)};
    CHECK(mellin_residue(Q, ops) == CRational(1));
  }
}

TEST_CASE("coboundary_anomaly: trivial and threshold cases") {
  Weight Q = default_weight();
  SUBCASE("identity in the derived slot kills every term") {
    std::vector<ClassicalSymbol> ops{random_symbol(-1, 2),
                                     ClassicalSymbol::identity(1)};
    CHECK(coboundary_anomaly(Q, ops, CoefficientConvention::kExact) ==
          CRational(0));
  }
  SUBCASE("orders summing below -dim M give exact zero") {
    for (int iter = 0; iter < 10; ++iter) {
      std::vector<ClassicalSymbol> ops{random_symbol(-3, -1),
                                       random_symbol(-3, 0)};
      int total = ops[0].order_bound() + ops[1].order_bound();
      if (total > -1) continue;
      CHECK(coboundary_anomaly(Q, ops, CoefficientConvention::kExact) ==
            CRational(0));
    }
  }
  SUBCASE("odd arity is rejected") {
    std::vector<ClassicalSymbol> ops{random_symbol(0, 1), random_symbol(0, 1),
                                     random_symbol(0, 1)};
    CHECK_THROWS_AS(
        coboundary_anomaly(Q, ops, CoefficientConvention::kExact),
        OutOfRange);
  }
}

TEST_CASE("coboundary_anomaly p=0 equals the printed k-sum") {
  Weight Q = default_weight();
  ClassicalSymbol A = shift_symbol(1);
  ClassicalSymbol B = sym_monomial(1, -1, CRational(1), CRational(1));
  std::vector<ClassicalSymbol> ops{A, B};
  CRational got = coboundary_anomaly(Q, ops, CoefficientConvention::kExact);

  // (1/q) sum_k (-1)^k/(k+1) res(A B^{(k+1)} Q^{-k-1}), k <= [a+b]+dim M-1.
  CRational want;
  for (int k = 0; k <= 1; ++k) {
    ClassicalSymbol adk = ad_power(Q, B, k + 1, -20);
    ClassicalSymbol qk = power_neg(Q, k + 1, -20);
    ClassicalSymbol prod = compose(compose(A, adk, -6), qk, -2);
    Rational coeff = Rational(k % 2 == 0 ? 1 : -1, (k + 1) * Q.q);
    want += wodzicki_residue(prod) * CRational(coeff);
  }
  CHECK(got == want);

  SUBCASE("exact and paper conventions coincide for p = 0") {
    CHECK(got == coboundary_anomaly(Q, ops, CoefficientConvention::kPaper));
  }
}

TEST_CASE("cyclicity of the finite part, exactly, at n = 2") {
  // chi_2(A0,A1,A2) = chi_2(A2,A0,A1) forces
  //   corr(A2,A0,A1) - corr(A0,A1,A2) = tr^Q(A0A1A2) - tr^Q(A2A0A1),
  // and the right side is the p = 0 coboundary of (A0A1, A2).  Everything
  // is an exact rational, so this pins the anomaly coefficients sharply.
  Weight Q = default_weight();
  for (int iter = 0; iter < 12; ++iter) {
    ClassicalSymbol a0 = random_symbol(-1, 1);
    ClassicalSymbol a1 = random_symbol(-1, 1);
    ClassicalSymbol a2 = random_symbol(-1, 1);
    std::vector<ClassicalSymbol> t012{a0, a1, a2};
    std::vector<ClassicalSymbol> t201{a2, a0, a1};
    ClassicalSymbol a01 = compose(a0, a1, -14);
    std::vector<ClassicalSymbol> pair{a01, a2};
    CRational lhs = correction_sum(Q, t201, CoefficientConvention::kExact) -
                    correction_sum(Q, t012, CoefficientConvention::kExact);
    CRational rhs = coboundary_anomaly(Q, pair, CoefficientConvention::kExact);
    CHECK(lhs == rhs);
  }
}

TEST_CASE("cutoff exactness: extra shells contribute exactly zero") {
  Weight Q = default_weight();
  for (int iter = 0; iter < 6; ++iter) {
    std::vector<ClassicalSymbol> ops{random_symbol(-2, 2),
                                     random_symbol(-2, 2)};
    CRational base = correction_sum(Q, ops, CoefficientConvention::kExact);
    TermTable table;
    CRational extended = correction_sum(
        Q, ops, CoefficientConvention::kExact, &table, 2);
    CHECK(base == extended);
    int total = ops[0].order_bound() + ops[1].order_bound();
    for (const auto& row : table)
      if (row.k.total() > total + 1) CHECK(row.residue == CRational(0));
  }
  SUBCASE("the coboundary bound |k| <= |a| + dim M - 1 is sharp too") {
    for (int iter = 0; iter < 6; ++iter) {
      std::vector<ClassicalSymbol> ops{random_symbol(-1, 1),
                                       random_symbol(-1, 1)};
      CRational base =
          coboundary_anomaly(Q, ops, CoefficientConvention::kExact);
      CRational extended =
          coboundary_anomaly(Q, ops, CoefficientConvention::kExact, nullptr, 2);
      CHECK(base == extended);
    }
  }
}

TEST_CASE("conventions coincide at the formula level for one slot") {
  Weight Q = default_weight();
  for (int iter = 0; iter < 8; ++iter) {
    std::vector<ClassicalSymbol> pair{random_symbol(-2, 2),
                                      random_symbol(-2, 2)};
    CHECK(correction_sum(Q, pair, CoefficientConvention::kExact) ==
          correction_sum(Q, pair, CoefficientConvention::kPaper));
    CHECK(coboundary_anomaly(Q, pair, CoefficientConvention::kExact) ==
          coboundary_anomaly(Q, pair, CoefficientConvention::kPaper));
  }
}

TEST_CASE("hochschild_b: n = 0 evaluator collapses on equal arguments") {
  auto prod = [](const Mat2& x, const Mat2& y) { return x * y; };
  auto trace = [](std::span<const Mat2> t) { return t[0].a + t[0].d; };
  Mat2 A = random_mat2();
  std::vector<Mat2> args{A, A};
  CRational v = hochschild_b<Mat2, CRational>(trace, std::span<const Mat2>(args), prod);
  CHECK(v == CRational(0));
}

TEST_CASE("hochschild_b: genuine matrix trace is a cocycle") {
  auto prod = [](const Mat2& x, const Mat2& y) { return x * y; };
  auto trace = [](std::span<const Mat2> t) {
    Mat2 acc = t[0];
    for (size_t i = 1; i < t.size(); ++i) acc = acc * t[i];
    return acc.a + acc.d;
  };
  for (int iter = 0; iter < 10; ++iter) {
    std::vector<Mat2> args{random_mat2(), random_mat2()};
    CRational v =
        hochschild_b<Mat2, CRational>(trace, std::span<const Mat2>(args), prod);
    CHECK(v == CRational(0));
  }
}

TEST_CASE("hochschild_b is nilpotent on arbitrary exact tables") {
  auto prod = [](const Mat2& x, const Mat2& y) { return x * y; };
  // A deterministic but structureless multilinear-free "table": any exact
  // function of the tuple works, b^2 = 0 needs only associativity.
  auto table = [](std::span<const Mat2> t) {
    CRational acc{Rational(1)};
    Rational salt(3);
    for (const auto& m : t) {
      acc *= (m.a + m.d * CRational(Rational(2)) + CRational(salt) +
              m.b * m.c);
      salt += 5;
    }
    return acc;
  };
  for (int n = 0; n <= 2; ++n) {
    for (int iter = 0; iter < 5; ++iter) {
      std::vector<Mat2> args;
      for (int i = 0; i < n + 3; ++i) args.push_back(random_mat2());
      auto b_table = [&](std::span<const Mat2> t) {
        return hochschild_b<Mat2, CRational>(table, t, prod);
      };
      CRational bb = hochschild_b<Mat2, CRational>(
          b_table, std::span<const Mat2>(args), prod);
      CHECK(bb == CRational(0));
    }
  }
}

TEST_CASE("family_derivative: structural zeros") {
  Weight Q = default_weight();
  SUBCASE("zero direction") {
    FamilySpec f = FamilySpec::make(Q, ClassicalSymbol::zero(1), std::nullopt);
    std::vector<ClassicalSymbol> ops{random_symbol(-1, 2)};
    CHECK(family_derivative(f, Rational(1, 2), ops,
                            CoefficientConvention::kExact) == CRational(0));
  }
  SUBCASE("trace-class argument: every residue term sits below threshold") {
    EigenvalueLaw dir;
    dir.p = {Rational(0), Rational(1)};
    FamilySpec f =
        FamilySpec::make(Q, dir.to_symbol(1), dir);
    std::vector<ClassicalSymbol> ops{sym_abs_xi_power(-2)};
    CHECK(family_derivative(f, Rational(1, 2), ops,
                            CoefficientConvention::kExact) == CRational(0));
  }
  SUBCASE("t outside the range is rejected") {
    EigenvalueLaw dir;
    dir.p = {Rational(0), Rational(1)};
    FamilySpec f = FamilySpec::make(Q, dir.to_symbol(1), dir);
    std::vector<ClassicalSymbol> ops{sym_abs_xi_power(1)};
    CHECK_THROWS_AS(family_derivative(f, Rational(3, 2), ops,
                                      CoefficientConvention::kExact),
                    OutOfRange);
  }
}

TEST_CASE("family_derivative: Q_t = 1 - Lap + t|D| against the closed form") {
  // For A = Op(|xi|) and n = 0 the derivative is
  //   -(1/2) res(|xi|^2 sigma(Q_t^{-1})) = t   (see the oracle cross-check).
  Weight Q = default_weight();
  EigenvalueLaw dir;
  dir.p = {Rational(0), Rational(1)};
  FamilySpec f = FamilySpec::make(Q, dir.to_symbol(1), dir);
  std::vector<ClassicalSymbol> ops{sym_abs_xi_power(1)};
  CHECK(family_derivative(f, Rational(1, 2), ops,
                          CoefficientConvention::kExact) ==
        CRational(Rational(1, 2)));
  CHECK(family_derivative(f, Rational(1, 4), ops,
                          CoefficientConvention::kExact) ==
        CRational(Rational(1, 4)));
}

TEST_CASE("interpolation_difference: trivial cases and the linear fixture") {
  Weight Q = default_weight();
  SUBCASE("zero direction integrates to exact zero") {
    FamilySpec f = FamilySpec::make(Q, ClassicalSymbol::zero(1), std::nullopt);
    std::vector<ClassicalSymbol> ops{random_symbol(-1, 1)};
    CochainValue v =
        interpolation_difference(f, ops, 8, CoefficientConvention::kExact);
    CHECK(v.exact_part.has_value());
    CHECK(v.exact_part->is_zero());
  }
  SUBCASE("integral of t over [0,1]") {
    EigenvalueLaw dir;
    dir.p = {Rational(0), Rational(1)};
    FamilySpec f = FamilySpec::make(Q, dir.to_symbol(1), dir);
    std::vector<ClassicalSymbol> ops{sym_abs_xi_power(1)};
    CochainValue v =
        interpolation_difference(f, ops, 8, CoefficientConvention::kExact);
    CHECK(v.value.real() == doctest::Approx(0.5).epsilon(1e-9));
    CHECK(std::abs(v.value.imag()) < 1e-12);
  }
}

TEST_CASE("gauss_legendre_01 integrates polynomials exactly") {
  std::vector<double> x, w;
  gauss_legendre_01(6, x, w);
  double s0 = 0, s1 = 0, s7 = 0;
  for (int i = 0; i < 6; ++i) {
    s0 += w[i];
    s1 += w[i] * x[i];
    s7 += w[i] * std::pow(x[i], 7.0);
  }
  CHECK(s0 == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(s1 == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(s7 == doctest::Approx(1.0 / 8.0).epsilon(1e-13));
}
