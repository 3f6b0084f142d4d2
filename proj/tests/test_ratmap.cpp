#include <gtest/gtest.h>

#include <random>

#include "birdeg/fixtures.hpp"
#include "helpers.hpp"

using namespace birdeg;
using birdeg::testing::random_form;

namespace {

template <class F>
ErrorKind kind_of(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  return ErrorKind::Usage;  // no throw; never the kind under test below
}

MultiPoly line_through(std::mt19937_64& rng, const ProjectivePoint& c) {
  std::uniform_int_distribution<int> dist(-6, 6);
  const auto v = variables(3);
  for (;;) {
    const Rational r0 = dist(rng), r1 = dist(rng), r2 = dist(rng);
    MultiPoly l = v[0] * (c[1] * r2 - c[2] * r1) + v[1] * (c[2] * r0 - c[0] * r2) +
                  v[2] * (c[0] * r1 - c[1] * r0);
    if (!l.is_zero()) return l;
  }
}

}  // namespace

TEST(RatMap, PullBackAndPoints) {
  const Fixture fx = builtin_fixture("ex2-dpi-plane");
  const auto v = variables(3);
  EXPECT_EQ(pull_back(fx.map, v[2]), (v[1] - v[2]) * (v[1] - v[2]));
  EXPECT_EQ(apply_map(fx.map, ProjectivePoint{1, 1, 2}), (ProjectivePoint{-1, 2, 1}));
  EXPECT_TRUE(indeterminacy_contains(fx.map, ProjectivePoint{1, 0, 0}));
  EXPECT_FALSE(indeterminacy_contains(fx.map, ProjectivePoint{0, 0, 1}));

  // z = 0 goes to [1:0:1], then to [0:1:1] in I(f)
  const auto orbit = orbit_until_indeterminate(fx.map, ProjectivePoint{1, 0, 1}, 10);
  EXPECT_TRUE(orbit.hit);
  EXPECT_EQ(orbit.steps, 1);
  EXPECT_EQ(orbit.points.back(), (ProjectivePoint{0, 1, 1}));
}

TEST(RatMap, CriticalFactorsInverseAndContraction) {
  const Fixture ex2 = builtin_fixture("ex2-dpi-plane");
  const auto exps = verify_critical_factors(ex2.map);
  EXPECT_EQ(exps.exponents.at("z"), 1);
  EXPECT_EQ(exps.exponents.at("y-z"), 2);
  EXPECT_EQ(exps.scalar, 2);

  const auto v = variables(3);
  const MultiPoly kplus = verify_inverse(ex2.map);
  EXPECT_EQ(kplus.total_degree(), 3);
  EXPECT_EQ(extract_power(kplus, v[2]).exponent, 1);
  EXPECT_EQ(extract_power(kplus, v[1] - v[2]).exponent, 2);

  for (const auto& id : builtin_fixture_ids()) {
    const Fixture fx = builtin_fixture(id);
    EXPECT_NO_THROW(validate_fixture(fx)) << id;
    for (const auto& k : fx.map.critical_factors) EXPECT_EQ(contraction_check(fx.map, k.id), k.target);
  }
}

TEST(RatMap, NegativeDescriptors) {
  Fixture fx = builtin_fixture("ex2-dpi-plane");

  auto missing = fx.map;
  missing.critical_factors.pop_back();
  EXPECT_EQ(kind_of([&] { verify_critical_factors(missing); }), ErrorKind::IncompleteFactorList);

  auto wrong_target = fx.map;
  wrong_target.critical_factors[0].target = ProjectivePoint{0, 0, 1};
  EXPECT_EQ(kind_of([&] { contraction_check(wrong_target, "z"); }), ErrorKind::TargetMismatch);
  EXPECT_EQ(kind_of([&] { validate_descriptor(wrong_target, fx.charts); }), ErrorKind::TargetMismatch);

  auto not_contracted = fx.map;
  not_contracted.critical_factors.push_back({"x", variables(3)[0], ProjectivePoint{1, 0, 0}, "phi10"});
  EXPECT_EQ(kind_of([&] { contraction_check(not_contracted, "x"); }), ErrorKind::NotContractedToPoint);

  auto bad_inverse = fx.map;
  (*bad_inverse.inverse)[0] = (*bad_inverse.inverse)[1];
  EXPECT_EQ(kind_of([&] { verify_inverse(bad_inverse); }), ErrorKind::NotInverse);

  auto lopsided = fx.map;
  lopsided.components[0] = lopsided.components[0] * variables(3)[0];
  EXPECT_EQ(kind_of([&] { validate_shape(lopsided); }), ErrorKind::NotHomogeneous);

  auto short_map = fx.map;
  short_map.components.pop_back();
  EXPECT_EQ(kind_of([&] { validate_shape(short_map); }), ErrorKind::InvalidDescriptor);
}

TEST(RatMap, Invariant) {
  const Fixture fx = builtin_fixture("ex2-dpi-plane");
  const auto v = variables(3);
  EXPECT_TRUE(verify_rational_invariant(fx.map, fx.invariant->numerator, fx.invariant->denominator));
  // x^3 z / y^4 is not invariant
  EXPECT_FALSE(verify_rational_invariant(fx.map, v[0] * v[0] * v[0] * v[2], pow(v[1], 4)));
  EXPECT_FALSE(verify_rational_invariant(fx.map, fx.invariant->numerator,
                                         fx.invariant->denominator + pow(v[2], 4)));
}

TEST(RatMap, OracleExamples) {
  EXPECT_EQ(oracle_degrees(builtin_fixture("ex3-linearizable").map, 5), (std::vector<long>{1, 2, 3, 4, 5, 6}));
  EXPECT_EQ(oracle_degrees(builtin_fixture("ex2-dpi-plane").map, 5), (std::vector<long>{1, 2, 4, 7, 12, 18}));
  EXPECT_EQ(oracle_degrees(builtin_fixture("identity").map, 3), (std::vector<long>{1, 1, 1, 1}));
  const auto it = iterate_minimal(builtin_fixture("ex2-dpi-plane").map, 3);
  EXPECT_EQ(it.degree, 7);
  for (const auto& c : it.components) EXPECT_EQ(c.total_degree(), 7);

  // without its factor list the common factor of f^3 cannot be removed
  auto bare = builtin_fixture("ex2-dpi-plane").map;
  bare.critical_factors.clear();
  EXPECT_EQ(kind_of([&] { oracle_degrees(bare, 3); }), ErrorKind::ResidualCommonFactor);
}

TEST(RatMap, DegreeDropAndFekete) {
  EXPECT_EQ(first_degree_drop(builtin_fixture("ex2-dpi-plane").golden_degrees, 2), 2);
  EXPECT_EQ(first_degree_drop(builtin_fixture("ex1-penrose-smith").golden_degrees, 2), 3);
  EXPECT_EQ(first_degree_drop(builtin_fixture("ex3-linearizable").golden_degrees, 2), 1);
  EXPECT_FALSE(first_degree_drop(builtin_fixture("generic-quadratic").golden_degrees, 2));
  for (const auto& id : builtin_fixture_ids()) EXPECT_TRUE(fekete_check(builtin_fixture(id).golden_degrees)) << id;
  EXPECT_FALSE(fekete_check({1, 2, 5}));
}

// f^*P = prod K^nu P~, the exponent of each K is the chart index of P, and
// the degree of P~ is d deg P minus the removed part.
TEST(RatMapProperty, ProperPullBackMatchesChartIndices) {
  std::mt19937_64 rng(11);
  for (const auto& id : builtin_fixture_ids()) {
    const Fixture fx = builtin_fixture(id);
    for (int i = 0; i < 100; ++i) {
      MultiPoly p = random_form(rng, 3, 1 + i % 4);
      for (const auto& k : fx.map.critical_factors)
        if (rng() % 2 && p.total_degree() < 4) p = p * line_through(rng, k.target);
      const MultiPoly fp = pull_back(fx.map, p);
      MultiPoly rebuilt = MultiPoly::constant(3, 1);
      long removed = 0;
      for (const auto& k : fx.map.critical_factors) {
        const int by_division = extract_power(fp, k.K).exponent;
        const int by_chart = local_index(find_chart(fx.charts, k.chart_ref), p);
        EXPECT_EQ(by_division, by_chart) << id << " " << k.id << " i=" << i;
        rebuilt = rebuilt * pow(k.K, static_cast<unsigned>(by_chart));
        removed += by_chart * k.K.total_degree();
      }
      const auto proper = proper_pull_back(fx.map, fx.charts, p);
      EXPECT_EQ(rebuilt * proper.ptilde, fp);
      EXPECT_EQ(proper.ptilde.total_degree(), fx.map.degree() * p.total_degree() - removed);
      EXPECT_LE(proper.ptilde.total_degree(), fx.map.degree() * p.total_degree());
      for (const auto& k : fx.map.critical_factors) EXPECT_FALSE(exact_divide(proper.ptilde, k.K));
    }
  }
}
