#include <gtest/gtest.h>

#include "birdeg/cli.hpp"

using namespace birdeg;
using cli::Method;

namespace {

void expect_agreement(const std::string& id, int n, std::vector<Method> methods) {
  const Fixture fx = builtin_fixture(id);
  std::vector<cli::DegreeSequenceReport> reports;
  for (auto m : methods) reports.push_back(cli::run_method(fx, m, n, 1));
  for (const auto& r : reports) {
    ASSERT_EQ(r.degrees.size(), static_cast<std::size_t>(n) + 1) << id << " " << cli::to_string(r.method);
    EXPECT_EQ(r.degrees, reports.front().degrees) << id << " " << cli::to_string(r.method);
  }
  const auto d = reports.front().degrees;
  EXPECT_EQ(std::vector<long>(fx.golden_degrees.begin(),
                              fx.golden_degrees.begin() + std::min<std::size_t>(d.size(), fx.golden_degrees.size())),
            std::vector<long>(d.begin(), d.begin() + std::min<std::size_t>(d.size(), fx.golden_degrees.size())))
      << id;
}

const std::vector<Method> kAll{Method::Oracle, Method::Indices, Method::Recurrence, Method::Picard,
                               Method::ClosedForm};

}  // namespace

TEST(Methods, Ex1AgreeUpTo8) { expect_agreement("ex1-penrose-smith", 8, kAll); }
TEST(Methods, Ex2AgreeUpTo8) { expect_agreement("ex2-dpi-plane", 8, kAll); }
TEST(Methods, Ex3AgreeUpTo8) { expect_agreement("ex3-linearizable", 8, kAll); }
TEST(Methods, IdentityAgreeUpTo8) { expect_agreement("identity", 8, kAll); }

// degrees double each step, so the polynomial methods stop at 7
TEST(Methods, GenericQuadraticAgree) {
  expect_agreement("generic-quadratic", 7, kAll);
  expect_agreement("generic-quadratic", 40, {Method::Recurrence, Method::Picard, Method::ClosedForm});
}
