#include <gtest/gtest.h>

#include "birdeg/fixtures.hpp"

using namespace birdeg;

namespace {

DivisorClass curve_class(long d, const std::vector<int>& mus) {
  DivisorClass c{Integer(d)};
  for (int m : mus) c.emplace_back(-m);
  return c;
}

}  // namespace

TEST(Picard, DegreesFromPowers) {
  const auto ex3 = builtin_fixture("ex3-linearizable");
  EXPECT_EQ(power_HH_entry(*ex3.picard, 7), 8);
  for (unsigned long n = 0; n <= 50; ++n) EXPECT_EQ(power_HH_entry(*ex3.picard, n), n + 1);

  const auto ex1 = builtin_fixture("ex1-penrose-smith");
  EXPECT_EQ(power_HH_entry(*ex1.picard, 4), 13);
  for (unsigned long n = 0; n <= 30; ++n)
    EXPECT_EQ(power_HH_entry(*ex1.picard, n), closed_form_value(ClosedForm::PenroseSmith, n));

  const auto ex2 = builtin_fixture("ex2-dpi-plane");
  for (unsigned long n = 0; n <= 13; ++n) EXPECT_EQ(power_HH_entry(*ex2.picard, n), ex2.golden_degrees[n]);
  EXPECT_EQ(power_HH_entry(*builtin_fixture("generic-quadratic").picard, 10), 1024);
}

TEST(Picard, FixedClasses) {
  const auto ex2 = builtin_fixture("ex2-dpi-plane");
  const auto k = to_int_vector({4, -1, -1, -2, -1, -1, -2, -1, -1, -1, -1});
  EXPECT_TRUE(is_fixed_class(*ex2.picard, k));
  EXPECT_EQ(intersection_product(*ex2.picard, k, k), 0);
  // a member of the invariant pencil has exactly this class
  const auto member = ex2.invariant->numerator + ex2.invariant->denominator * Rational(3);
  EXPECT_EQ(curve_class(member.total_degree(), fixture_mus(ex2, member)), k);
  EXPECT_EQ(ex2.picard->known_fixed_classes.front(), k);

  // the same class with E1, E2, E6 relabelled as E6, E1, E2 is not fixed
  const auto relabelled = to_int_vector({4, -1, -2, -2, -1, -1, -1, -1, -1, -1, -1});
  EXPECT_FALSE(is_fixed_class(*ex2.picard, relabelled));
  EXPECT_EQ(intersection_product(*ex2.picard, relabelled, relabelled), 0);
  const auto gens = fixed_classes(*ex2.picard);
  ASSERT_FALSE(gens.empty());
  for (const auto& g : gens) EXPECT_TRUE(is_fixed_class(*ex2.picard, g));
  EXPECT_EQ(fixed_classes(*ex2.picard), gens);

  const auto ex1 = builtin_fixture("ex1-penrose-smith");
  const auto anti = to_int_vector({3, -1, -1, -1, -1, -1, -1, -1, -1, -1});
  EXPECT_TRUE(is_fixed_class(*ex1.picard, anti));
  EXPECT_EQ(intersection_product(*ex1.picard, anti, anti), 0);
  for (const auto& c : ex1.picard->known_fixed_classes) EXPECT_TRUE(is_fixed_class(*ex1.picard, c));
  EXPECT_GE(fixed_classes(*ex1.picard).size(), 3u);
  EXPECT_FALSE(is_fixed_class(*ex1.picard, to_int_vector({1, 0, 0, 0, 0, 0, 0, 0, 0, 0})));
}

TEST(Picard, IntersectionAndOrthogonality) {
  const auto ex2 = builtin_fixture("ex2-dpi-plane");
  auto h = to_int_vector(std::vector<long>(11, 0));
  h[0] = 1;
  auto e1 = to_int_vector(std::vector<long>(11, 0));
  e1[1] = 1;
  EXPECT_EQ(intersection_product(*ex2.picard, h, h), 1);
  EXPECT_EQ(intersection_product(*ex2.picard, e1, e1), -1);
  EXPECT_EQ(intersection_product(*ex2.picard, h, e1), 0);

  for (const auto& id : builtin_fixture_ids()) {
    const auto fx = builtin_fixture(id);
    EXPECT_EQ(orthogonality_check(*fx.picard), fx.picard->automorphism) << id;
  }
  EXPECT_TRUE(orthogonality_check(*builtin_fixture("ex1-penrose-smith").picard));
  EXPECT_TRUE(orthogonality_check(*ex2.picard));
  EXPECT_FALSE(orthogonality_check(*builtin_fixture("ex3-linearizable").picard));
}

TEST(Picard, Validation) {
  auto pic = *builtin_fixture("ex3-linearizable").picard;
  EXPECT_NO_THROW(validate_picard(pic));
  auto bad = pic;
  bad.basis[0] = "E1";
  EXPECT_THROW(validate_picard(bad), Error);
  bad = pic;
  bad.basis.push_back("E3");
  EXPECT_THROW(validate_picard(bad), Error);
  bad = pic;
  bad.surface = false;
  EXPECT_THROW(orthogonality_check(bad), Error);
  EXPECT_THROW(apply_to_class(pic, to_int_vector({1, 0, 0})), Error);
}

// Classes d H - sum mu_i E_i of the proper transforms of P_n follow M.
TEST(Picard, CurveClassesFollowTheMatrix) {
  const auto ex2 = builtin_fixture("ex2-dpi-plane");
  const auto states = iterate_indices_generic(ex2.map, ex2.charts, ex2.tracked(), 7, 1).states;
  for (int n = 0; n < 7; ++n) {
    const auto now = curve_class(states[n].d, fixture_mus(ex2, states[n].P));
    const auto next = curve_class(states[n + 1].d, fixture_mus(ex2, states[n + 1].P));
    EXPECT_EQ(apply_to_class(*ex2.picard, now), next) << "n=" << n;
  }
  EXPECT_EQ(ex2.picard->matrix, conjugate_by_form(ex2.mu_recurrence->matrix));

  const auto ex1 = builtin_fixture("ex1-penrose-smith");
  const auto s1 = iterate_indices_generic(ex1.map, ex1.charts, ex1.tracked(), 6, 1).states;
  for (int n = 0; n < 6; ++n) {
    std::vector<int> now, next;
    for (const auto& [id, v] : s1[n].nu) now.push_back(v);
    for (const auto& [id, v] : s1[n + 1].nu) next.push_back(v);
    EXPECT_EQ(apply_to_class(*ex1.picard, curve_class(s1[n].d, now)), curve_class(s1[n + 1].d, next))
        << "n=" << n;
  }
}
