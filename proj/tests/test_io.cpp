#include <gtest/gtest.h>

#include <filesystem>
#include <random>

#include "birdeg/io.hpp"
#include "helpers.hpp"

using namespace birdeg;
using io::Json;

namespace {

ErrorKind parse_kind(const std::string& text, std::size_t nvars = 0) {
  try {
    io::poly_from_json(Json::parse(text), nvars);
  } catch (const Error& e) {
    return e.kind();
  }
  return ErrorKind::Usage;
}

}  // namespace

TEST(Io, PolynomialFormat) {
  const auto v = variables(3);
  const MultiPoly p = v[0] * v[1] * Rational(-3, 4) + v[2] * v[2] * 5;
  const Json j = io::to_json(p, {"x", "y", "z"});
  EXPECT_EQ(j["vars"], Json::parse(R"(["x","y","z"])"));
  EXPECT_EQ(j["terms"].size(), 2u);
  EXPECT_EQ(io::poly_from_json(j), p);
  EXPECT_EQ(io::poly_from_json(j, 3), p);

  const auto q = io::poly_from_json(Json::parse(R"({"vars":["u","v"],"terms":[{"e":[2,0],"c":"1/2"},{"e":[0,1],"c":3}]})"));
  const auto uv = variables(2);
  EXPECT_EQ(q, uv[0] * uv[0] * Rational(1, 2) + uv[1] * 3);

  EXPECT_EQ(io::point_from_json(Json::parse(R"(["2","0","4"])")), (ProjectivePoint{1, 0, 2}));
  EXPECT_EQ(io::to_json(ProjectivePoint{1, 0, Rational(1, 2)}), Json::parse(R"(["1","0","1/2"])"));
}

TEST(Io, ParseErrors) {
  EXPECT_EQ(parse_kind(R"({"terms":[]})"), ErrorKind::ParseError);
  EXPECT_EQ(parse_kind(R"({"vars":["x"],"terms":[{"e":[1,1],"c":"1"}]})"), ErrorKind::ArityMismatch);
  EXPECT_EQ(parse_kind(R"({"vars":["x","y"],"terms":[{"e":[1,0],"c":"1"}]})", 3), ErrorKind::ArityMismatch);
  EXPECT_EQ(parse_kind(R"({"vars":["x"],"terms":[{"e":[-1],"c":"1"}]})"), ErrorKind::ParseError);
  EXPECT_EQ(parse_kind(R"({"vars":["x"],"terms":[{"e":[1],"c":"1/0"}]})"), ErrorKind::ParseError);
  EXPECT_EQ(parse_kind(R"({"vars":["x"],"terms":[{"e":[1],"c":"abc"}]})"), ErrorKind::ParseError);
  EXPECT_EQ(parse_kind(R"({"vars":["x"],"terms":[{"e":[1]}]})"), ErrorKind::ParseError);
  EXPECT_THROW(io::point_from_json(Json::parse(R"(["0","0"])")), Error);
  EXPECT_THROW(io::map_from_json(Json::parse(R"({"name":"m"})")), Error);
  EXPECT_THROW(io::read_json_file("/nonexistent/birdeg.json"), Error);
}

TEST(Io, FixtureRoundTrips) {
  const auto dir = std::filesystem::temp_directory_path() / "birdeg_test_io";
  std::filesystem::create_directories(dir);
  for (const auto& id : builtin_fixture_ids()) {
    const Fixture fx = builtin_fixture(id);
    const Json j = io::to_json(fx);
    const Fixture back = io::fixture_from_json(j);
    EXPECT_EQ(back, fx) << id;
    EXPECT_EQ(io::to_json(back).dump(), j.dump()) << id;

    EXPECT_EQ(io::map_from_json(io::to_json(fx.map)), fx.map) << id;
    EXPECT_EQ(io::charts_from_json(io::to_json(fx.charts)), fx.charts) << id;
    EXPECT_EQ(io::picard_from_json(io::to_json(*fx.picard)), *fx.picard) << id;
    EXPECT_EQ(io::recurrence_from_json(io::to_json(*fx.recurrence)), *fx.recurrence) << id;

    const auto path = dir / (id + ".json");
    io::write_json_file(path, j);
    EXPECT_EQ(io::load_fixture(path), fx) << id;
  }
  std::filesystem::remove_all(dir);
}

TEST(Io, SingleChartObject) {
  const Fixture fx = builtin_fixture("ex2-dpi-plane");
  const auto one = io::charts_from_json(io::to_json(fx.charts[3]));
  ASSERT_EQ(one.size(), 1u);
  EXPECT_EQ(one.front(), fx.charts[3]);
  EXPECT_TRUE(one.front().tower);
}

TEST(Io, LargeIntegersSurvive) {
  IntVector v{Integer("123456789012345678901234567890"), Integer(-3)};
  const Json j = io::to_json(v);
  EXPECT_TRUE(j[0].is_string());
  EXPECT_TRUE(j[1].is_number_integer());
  EXPECT_EQ(io::int_vector_from_json(j), v);
}

TEST(IoProperty, RandomPolynomialsRoundTrip) {
  std::mt19937_64 rng(12);
  for (int i = 0; i < 100; ++i) {
    const std::size_t n = 1 + i % 4;
    MultiPoly p = birdeg::testing::random_poly(rng, n, 4);
    p = p * Rational(1 + i % 5, 3 + i % 7);
    std::vector<std::string> names;
    for (std::size_t k = 0; k < n; ++k) names.push_back("t" + std::to_string(k));
    EXPECT_EQ(io::poly_from_json(Json::parse(io::to_json(p, names).dump())), p);
  }
}
