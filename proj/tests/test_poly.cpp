#include <gtest/gtest.h>

#include <random>

#include "birdeg/poly.hpp"
#include "helpers.hpp"

using namespace birdeg;
using birdeg::testing::random_form;
using birdeg::testing::random_poly;

namespace {

struct Xyz {
  std::vector<MultiPoly> v = variables(3);
  const MultiPoly& x = v[0];
  const MultiPoly& y = v[1];
  const MultiPoly& z = v[2];
};

bool canonical(const MultiPoly& p) {
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (p.terms()[i].coef == 0) return false;
    if (i > 0 && !(p.terms()[i - 1].mono > p.terms()[i].mono)) return false;
  }
  return true;
}

// Brute-force product: every pair of terms, merged by from_terms.
MultiPoly naive_mul(const MultiPoly& a, const MultiPoly& b) {
  std::vector<Term> terms;
  for (const auto& s : a.terms())
    for (const auto& t : b.terms()) terms.push_back({s.mono * t.mono, s.coef * t.coef});
  return MultiPoly::from_terms(a.nvars(), std::move(terms));
}

// Term-by-term expansion of a composition through repeated naive products.
MultiPoly naive_substitute(const MultiPoly& p, const std::vector<MultiPoly>& images) {
  const std::size_t n = images.front().nvars();
  MultiPoly out(n);
  for (const auto& t : p.terms()) {
    MultiPoly term = MultiPoly::constant(n, t.coef);
    for (std::size_t i = 0; i < images.size(); ++i)
      for (Monomial::Exponent k = 0; k < t.mono[i]; ++k) term = naive_mul(term, images[i]);
    out += term;
  }
  return out;
}

}  // namespace

TEST(Poly, MultiplicationExamples) {
  Xyz v;
  const MultiPoly p = v.x * v.x + v.y * v.z * 3;
  EXPECT_EQ(p * MultiPoly::constant(3, 1), p);
  const MultiPoly l = v.y - v.z;
  const MultiPoly cube = (l * l) * l;
  EXPECT_EQ(cube, pow(l, 3));
  EXPECT_EQ(cube.total_degree(), 3);
  EXPECT_EQ(cube, v.y * v.y * v.y - v.y * v.y * v.z * 3 + v.y * v.z * v.z * 3 - v.z * v.z * v.z);
}

TEST(Poly, DegreeAndHomogeneity) {
  Xyz v;
  const MultiPoly a = v.x * v.x * v.y + v.x * v.y * v.z;
  EXPECT_EQ(a.total_degree(), 3);
  EXPECT_TRUE(a.is_homogeneous());
  EXPECT_FALSE((v.x + v.y * v.z).is_homogeneous());
  const MultiPoly comp = v.y * (v.y - v.z);
  EXPECT_EQ(comp.total_degree(), 2);
  EXPECT_TRUE(comp.is_homogeneous());
  EXPECT_THROW((void)MultiPoly(3).total_degree(), Error);
}

TEST(Poly, SubstituteExamples) {
  Xyz v;
  const std::vector<MultiPoly> f{v.y * (v.y - v.z), v.x * v.z, (v.y - v.z) * (v.y - v.z)};
  EXPECT_EQ(substitute(v.x, f), v.y * (v.y - v.z));
  const MultiPoly p = v.x * v.x * 3 - v.y * v.z + v.z;
  EXPECT_EQ(substitute(p, v.v), p);
  const MultiPoly s = substitute(v.x + v.y + v.z, f);
  EXPECT_EQ(s, v.y * v.y - v.y * v.z + v.x * v.z + (v.y - v.z) * (v.y - v.z));
  EXPECT_EQ(s.total_degree(), 2);
  EXPECT_THROW((void)substitute(p, std::vector<MultiPoly>{v.x, v.y}), Error);
}

TEST(Poly, ExactDivideExamples) {
  Xyz v;
  auto q = exact_divide(v.x * v.x - v.y * v.y, v.x - v.y);
  ASSERT_TRUE(q);
  EXPECT_EQ(*q, v.x + v.y);
  EXPECT_FALSE(exact_divide(v.x * v.x + v.y * v.y, v.x - v.y));
  EXPECT_THROW((void)exact_divide(v.x, MultiPoly(3)), Error);
}

TEST(Poly, ExtractPowerExamples) {
  Xyz v;
  const MultiPoly l = v.y - v.z;
  auto a = extract_power(v.x * pow(l, 3), l);
  EXPECT_EQ(a.exponent, 3);
  EXPECT_EQ(a.cofactor, v.x);
  auto b = extract_power(v.x + v.y, v.z);
  EXPECT_EQ(b.exponent, 0);
  EXPECT_EQ(b.cofactor, v.x + v.y);
  auto c = extract_power(v.z * l * l * 2, v.z);
  EXPECT_EQ(c.exponent, 1);
  EXPECT_EQ(c.cofactor, l * l * 2);
}

TEST(Poly, JacobianExamples) {
  Xyz v;
  const std::vector<MultiPoly> f2{v.y * (v.y - v.z), v.x * v.z, (v.y - v.z) * (v.y - v.z)};
  EXPECT_EQ(jacobian_det(f2), v.z * (v.y - v.z) * (v.y - v.z) * 2);
  const MultiPoly lin = jacobian_det(v.v);
  EXPECT_TRUE(lin.is_constant());
  EXPECT_EQ(lin.constant_value(), 1);
  const MultiPoly k = v.x - v.y + v.z;
  const std::vector<MultiPoly> f3{v.x * k + (v.x - v.y) * v.z, v.x * k, v.z * k};
  const auto split_z = extract_power(jacobian_det(f3), v.z);
  const auto split_k = extract_power(split_z.cofactor, k);
  EXPECT_EQ(split_z.exponent, 2);
  EXPECT_EQ(split_k.exponent, 1);
  EXPECT_TRUE(split_k.cofactor.is_constant());
}

TEST(Poly, EvaluationLinesAndGcd) {
  Xyz v;
  const std::vector<Rational> e0{1, 0, 0};
  EXPECT_EQ(evaluate(v.x + v.y + v.z, e0), 1);
  const std::vector<Rational> base{0, 0, 1}, dir{1, 1, 0};
  EXPECT_TRUE(restrict_to_line(v.x * v.x - v.y * v.y, base, dir).is_zero());
  const auto t = MultiPoly::variable(1, 0);
  const auto one = MultiPoly::constant(1, 1);
  EXPECT_EQ(univariate_gcd(t * t - one, t * t - t), t - one);
}

TEST(Poly, ModularCoprimality) {
  const auto t = MultiPoly::variable(1, 0);
  const auto one = MultiPoly::constant(1, 1);
  const std::vector<MultiPoly> coprime{t * t - one, t * t + one};
  const std::vector<MultiPoly> shared{(t - one) * (t + one * 3), (t - one) * t};
  EXPECT_TRUE(coprime_mod_prime(coprime));
  EXPECT_FALSE(coprime_mod_prime(shared));
}

TEST(PolyProperty, RingOperationsStayCanonical) {
  std::mt19937_64 rng(11);
  for (int i = 0; i < 100; ++i) {
    const auto a = random_poly(rng, 3, 4);
    const auto b = random_poly(rng, 3, 4);
    const auto c = random_poly(rng, 3, 3);
    const auto ab = a * b;
    EXPECT_TRUE(canonical(a + b));
    EXPECT_TRUE(canonical(a - b));
    EXPECT_TRUE(canonical(ab));
    EXPECT_EQ(ab, naive_mul(a, b));
    EXPECT_EQ(ab, b * a);
    EXPECT_EQ(a * (b + c), ab + a * c);
    EXPECT_TRUE((a - a).is_zero());
  }
}

TEST(PolyProperty, SubstituteMatchesNaiveExpansion) {
  std::mt19937_64 rng(12);
  for (int i = 0; i < 60; ++i) {
    const unsigned m = 1 + i % 4;
    const unsigned d = 1 + i % 3;
    const auto p = random_form(rng, 3, m);
    std::vector<MultiPoly> images;
    for (int k = 0; k < 3; ++k) images.push_back(random_form(rng, 3, d));
    const auto s = substitute(p, images);
    EXPECT_TRUE(canonical(s));
    EXPECT_EQ(s, naive_substitute(p, images));
    if (!s.is_zero()) {
      EXPECT_TRUE(s.is_homogeneous());
      EXPECT_EQ(s.total_degree(), static_cast<long>(m * d));
    }
  }
}

TEST(PolyProperty, DenseSubstitutionPaths) {
  // large homogeneous p triggers the dense integer path; compare with naive
  std::mt19937_64 rng(13);
  const auto uv = variables(2);
  const auto one = MultiPoly::constant(2, 1);
  for (int i = 0; i < 10; ++i) {
    const auto p = random_form(rng, 3, 6 + i % 3) * Rational(1, 3);
    std::vector<MultiPoly> affine{uv[0] * Rational(1, 2), one, uv[0] * uv[1] - one * 2};
    EXPECT_EQ(substitute(p, affine), naive_substitute(p, affine));
    std::vector<MultiPoly> quad{random_form(rng, 3, 2), random_form(rng, 3, 2), random_form(rng, 3, 2)};
    EXPECT_EQ(substitute(p, quad), naive_substitute(p, quad));
  }
}

TEST(PolyProperty, DivisionRoundTrip) {
  std::mt19937_64 rng(14);
  int not_divisible = 0;
  for (int i = 0; i < 100; ++i) {
    const auto d = random_form(rng, 3, 1 + i % 2);
    const auto q = random_form(rng, 3, 2 + i % 3);
    const auto p = d * q;
    auto back = exact_divide(p, d);
    ASSERT_TRUE(back);
    EXPECT_EQ(d * *back, p);
    // perturbed dividend: a refusal must be confirmed on some line
    const auto r = p + random_form(rng, 3, p.total_degree(), 0.2);
    auto res = exact_divide(r, d);
    if (res) {
      EXPECT_EQ(d * *res, r);
      continue;
    }
    ++not_divisible;
    std::mt19937_64 line_rng(i);
    std::uniform_int_distribution<int> coord(-20, 20);
    auto point = [&] { return std::vector<Rational>{coord(line_rng), coord(line_rng), coord(line_rng)}; };
    bool refuted = false;
    for (int l = 0; l < 5 && !refuted; ++l) {
      auto base = point();
      auto dir = point();
      auto rd = detail::to_dense(restrict_to_line(d, base, dir));
      auto rr = detail::to_dense(restrict_to_line(r, base, dir));
      detail::trim(rd);
      if (rd.empty()) continue;
      detail::remainder_in_place(rr, rd);
      refuted = !rr.empty();
    }
    EXPECT_TRUE(refuted);
  }
  EXPECT_GT(not_divisible, 0);
}

TEST(PolyProperty, ExtractPowerIsAdditive) {
  std::mt19937_64 rng(15);
  Xyz v;
  // irreducible divisors of degree <= 2: random lines and a smooth conic
  const MultiPoly conic = v.x * v.x + v.y * v.y - v.z * v.z * 2;
  for (int i = 0; i < 200; ++i) {
    const MultiPoly d = i % 4 == 3 ? conic : random_form(rng, 3, 1, 1.0);
    MultiPoly p = random_form(rng, 3, 1 + i % 3);
    MultiPoly q = random_form(rng, 3, 1 + (i / 3) % 3);
    for (int k = 0; k < i % 3; ++k) p = p * d;
    for (int k = 0; k < (i / 2) % 2; ++k) q = q * d;
    const int tp = extract_power(p, d).exponent;
    const int tq = extract_power(q, d).exponent;
    EXPECT_EQ(extract_power(p * q, d).exponent, tp + tq);
  }
}

TEST(PolyProperty, LinearPowerFastPathMatchesHeapDivision) {
  std::mt19937_64 rng(16);
  for (int i = 0; i < 30; ++i) {
    const auto k = random_form(rng, 3, 1, 1.0) * Rational(1 + i % 3, 2);
    auto p = random_form(rng, 3, 6, 1.0);
    for (int j = 0; j < 1 + i % 4; ++j) p = p * k;
    ASSERT_GT(p.size(), 16u);
    auto fast = extract_power(p, k);
    PowerSplit slow{0, p};
    while (auto q = exact_divide(slow.cofactor, k)) {
      slow.cofactor = *q;
      ++slow.exponent;
    }
    EXPECT_EQ(fast.exponent, slow.exponent);
    EXPECT_EQ(fast.cofactor, slow.cofactor);
    EXPECT_EQ(extract_power(p, k, 1).exponent, std::min(1, slow.exponent));
  }
}

TEST(PolyProperty, JacobianDegree) {
  std::mt19937_64 rng(17);
  for (int i = 0; i < 50; ++i) {
    const unsigned d = 1 + i % 3;
    std::vector<MultiPoly> f;
    for (int k = 0; k < 3; ++k) f.push_back(random_form(rng, 3, d));
    const auto j = jacobian_det(f);
    if (j.is_zero()) continue;
    EXPECT_TRUE(j.is_homogeneous());
    EXPECT_EQ(j.total_degree(), static_cast<long>(3 * (d - 1)));
  }
}

TEST(Poly, Printing) {
  Xyz v;
  EXPECT_EQ(to_string(v.x * v.x * Rational(3, 2) - v.z), "3/2*x0^2 - x2");
  const std::vector<std::string> names{"x", "y", "z"};
  EXPECT_EQ(to_string(v.y - v.z, names), "y - z");
  EXPECT_EQ(to_string(MultiPoly(3)), "0");
}
