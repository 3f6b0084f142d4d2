#pragma once

// Builtin maps with their charts, recurrences, Picard data and golden values.

#include <array>
#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "birdeg/blowup.hpp"
#include "birdeg/dynamics.hpp"
#include "birdeg/picard.hpp"
#include "birdeg/poly.hpp"
#include "birdeg/ratmap.hpp"

namespace birdeg {

/// nu of one chart as a combination of the concatenated tower indices.
struct NuMuRelation {
  std::string chart_id;
  std::vector<MuTerm> terms;

  friend bool operator==(const NuMuRelation&, const NuMuRelation&) = default;
};

struct RationalInvariant {
  MultiPoly numerator;
  MultiPoly denominator;

  friend bool operator==(const RationalInvariant&, const RationalInvariant&) = default;
};

struct Fixture {
  std::string id;
  std::string description;
  BirationalMapDescriptor map;
  std::vector<Chart> charts;  // every chart is tracked, in this order
  std::optional<RecurrenceSystem> recurrence;
  std::optional<PicardMatrix> picard;
  ClosedForm closed_form = ClosedForm::None;
  std::vector<long> scalar_recurrence;
  std::vector<long> golden_degrees;
  std::vector<std::vector<long>> golden_indices;  // per n, one entry per chart
  std::vector<std::string> mu_sources;             // charts whose towers give mu_1, mu_2, ...
  std::vector<NuMuRelation> nu_mu;
  std::optional<RecurrenceSystem> mu_recurrence;   // on (d, mu_1, ..., mu_m)
  std::optional<RationalInvariant> invariant;
  std::map<std::string, std::string> params;

  [[nodiscard]] std::vector<std::string> tracked() const {
    std::vector<std::string> out;
    for (const auto& c : charts) out.push_back(c.id);
    return out;
  }

  friend bool operator==(const Fixture&, const Fixture&) = default;
};

inline void validate_fixture(const Fixture& fx) {
  validate_descriptor(fx.map, fx.charts);
  if (fx.recurrence) validate_recurrence(*fx.recurrence);
  if (fx.mu_recurrence) validate_recurrence(*fx.mu_recurrence);
  if (fx.picard) validate_picard(*fx.picard);
  for (const auto& id : fx.mu_sources)
    if (!find_chart(fx.charts, id).tower)
      fail(ErrorKind::InvalidDescriptor, "chart " + id + " has no tower");
  for (const auto& rel : fx.nu_mu) find_chart(fx.charts, rel.chart_id);
}

/// mu_1(P), ..., mu_m(P) over the concatenated towers of the fixture.
inline std::vector<int> fixture_mus(const Fixture& fx, const MultiPoly& p) {
  std::vector<int> out;
  for (const auto& id : fx.mu_sources) {
    auto part = elementary_indices(*find_chart(fx.charts, id).tower, p);
    out.insert(out.end(), part.begin(), part.end());
  }
  return out;
}

namespace detail {

using Mat3 = std::array<std::array<Rational, 3>, 3>;

inline Mat3 adjugate(const Mat3& m) {
  Mat3 out;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      const int r0 = (j + 1) % 3, r1 = (j + 2) % 3, c0 = (i + 1) % 3, c1 = (i + 2) % 3;
      out[i][j] = m[r0][c0] * m[r1][c1] - m[r0][c1] * m[r1][c0];
    }
  return out;
}

inline std::vector<MultiPoly> apply_linear(const Mat3& m, const std::vector<MultiPoly>& v) {
  std::vector<MultiPoly> out;
  for (int i = 0; i < 3; ++i) {
    MultiPoly s(v[0].nvars());
    for (int j = 0; j < 3; ++j) s += v[j] * m[i][j];
    out.push_back(s);
  }
  return out;
}

inline std::vector<MultiPoly> quadratic_involution(const std::vector<MultiPoly>& y) {
  return {y[1] * y[2], y[0] * y[2], y[0] * y[1]};
}

// L1 o sigma o M applied to the coordinate functions
inline std::vector<MultiPoly> cremona(const Mat3& l1, const Mat3& m) {
  return apply_linear(l1, quadratic_involution(apply_linear(m, variables(3))));
}

inline ProjectivePoint column(const Mat3& m, int j) {
  return ProjectivePoint({m[0][j], m[1][j], m[2][j]});
}

inline Mat3 mat3(const std::array<std::array<long, 3>, 3>& rows) {
  Mat3 out;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) out[i][j] = rows[i][j];
  return out;
}

inline std::vector<std::string> xyz() { return {"x", "y", "z"}; }

inline Chart make_chart(std::string id, ProjectivePoint center, std::vector<MultiPoly> coords,
                        std::optional<ChartTower> tower = std::nullopt) {
  Chart c;
  c.id = std::move(id);
  c.center = std::move(center);
  c.coords = std::move(coords);
  c.tower = std::move(tower);
  return c;
}

// Picard matrix f_X^* = J (f_X)_*^T J from the push-forward images of the
// basis (rows are the images, written as classes).
inline IntMatrix pullback_from_pushforward(const std::vector<std::vector<long>>& images) {
  return conjugate_by_form(to_int_matrix(images));
}

inline std::vector<long> class_vector(std::size_t n, long h, std::initializer_list<std::pair<int, long>> es) {
  std::vector<long> v(n, 0);
  v[0] = h;
  for (auto [i, c] : es) v[static_cast<std::size_t>(i)] += c;
  return v;
}

inline std::vector<std::string> picard_basis(std::size_t exceptional) {
  std::vector<std::string> b{"H"};
  for (std::size_t i = 1; i <= exceptional; ++i) b.push_back("E" + std::to_string(i));
  return b;
}

inline std::vector<std::vector<long>> unit_rows(std::size_t n) {
  std::vector<std::vector<long>> m(n, std::vector<long>(n, 0));
  for (std::size_t i = 0; i < n; ++i) m[i][i] = 1;
  return m;
}

}  // namespace detail

/// The quadratic family x_i (x_i + a x_{i+1} + x_{i+2}/a).
inline Fixture make_penrose_smith(const Rational& a) {
  if (a == 0) fail(ErrorKind::InvalidDescriptor, "parameter a must be nonzero");
  using detail::Mat3;
  const auto v = variables(3);
  const Rational ai = 1 / a;
  Fixture fx;
  fx.id = "ex1-penrose-smith";
  fx.description = "Penrose-Smith quadratic map, nine sigma-processes, automorphism";
  fx.params["a"] = a.get_str();
  auto& f = fx.map;
  f.name = fx.id;
  f.dimension = 2;
  f.variables = detail::xyz();
  f.components = {v[0] * (v[0] + a * v[1] + ai * v[2]), v[1] * (v[1] + a * v[2] + ai * v[0]),
                  v[2] * (v[2] + a * v[0] + ai * v[1])};

  Mat3 l1, l2;
  l1[0] = {0, -a, 1};
  l1[1] = {1, 0, -a};
  l1[2] = {-a, 1, 0};
  l2[0] = {0, -1, a};
  l2[1] = {a, 0, -1};
  l2[2] = {-1, a, 0};
  f.inverse = detail::apply_linear(l2, detail::quadratic_involution(
                                           detail::apply_linear(detail::adjugate(l1), v)));

  std::vector<ProjectivePoint> A, C;
  for (int i = 0; i < 3; ++i) {
    A.push_back(detail::column(l1, i));
    C.push_back(detail::column(l2, i));
  }
  std::vector<ProjectivePoint> B;
  for (const auto& p : A) B.push_back(apply_map(f, p));

  for (int i = 0; i < 3; ++i) fx.charts.push_back(sigma_chart("phi" + std::to_string(i + 1), A[i]));
  for (int i = 0; i < 3; ++i) fx.charts.push_back(sigma_chart("phi" + std::to_string(i + 4), B[i]));
  for (int i = 0; i < 3; ++i) fx.charts.push_back(sigma_chart("phi" + std::to_string(i + 7), C[i]));

  for (int i = 0; i < 3; ++i) {
    const auto& p = C[(i + 1) % 3];
    const auto& q = C[(i + 2) % 3];
    // line through C_j and C_k: coefficients are the cross product
    MultiPoly k = v[0] * (p[1] * q[2] - p[2] * q[1]) + v[1] * (p[2] * q[0] - p[0] * q[2]) +
                  v[2] * (p[0] * q[1] - p[1] * q[0]);
    f.critical_factors.push_back(
        {"K" + std::to_string(i + 1), primitive_part(k), A[i], "phi" + std::to_string(i + 1)});
  }

  std::vector<std::vector<long>> rec(10, std::vector<long>(10, 0));
  rec[0] = {2, -1, -1, -1, 0, 0, 0, 0, 0, 0};
  for (int i = 1; i <= 6; ++i) rec[i][i + 3] = 1;
  rec[7] = {1, 0, -1, -1, 0, 0, 0, 0, 0, 0};
  rec[8] = {1, -1, 0, -1, 0, 0, 0, 0, 0, 0};
  rec[9] = {1, -1, -1, 0, 0, 0, 0, 0, 0, 0};
  fx.recurrence = RecurrenceSystem{{"d", "phi1", "phi2", "phi3", "phi4", "phi5", "phi6", "phi7", "phi8", "phi9"},
                                   to_int_matrix(rec), to_int_vector({1, 0, 0, 0, 0, 0, 0, 0, 0, 0})};

  using detail::class_vector;
  std::vector<std::vector<long>> push{
      class_vector(10, 2, {{1, -1}, {2, -1}, {3, -1}}),
      class_vector(10, 0, {{4, 1}}), class_vector(10, 0, {{5, 1}}), class_vector(10, 0, {{6, 1}}),
      class_vector(10, 0, {{7, 1}}), class_vector(10, 0, {{8, 1}}), class_vector(10, 0, {{9, 1}}),
      class_vector(10, 1, {{2, -1}, {3, -1}}), class_vector(10, 1, {{1, -1}, {3, -1}}),
      class_vector(10, 1, {{1, -1}, {2, -1}})};
  PicardMatrix pic;
  pic.basis = detail::picard_basis(9);
  pic.matrix = detail::pullback_from_pushforward(push);
  pic.surface = true;
  pic.automorphism = true;
  pic.known_fixed_classes = {to_int_vector({3, -1, -1, -1, -1, -1, -1, -1, -1, -1}),
                             to_int_vector(class_vector(10, 1, {{1, -1}, {4, -1}, {7, -1}})),
                             to_int_vector(class_vector(10, 1, {{2, -1}, {5, -1}, {8, -1}})),
                             to_int_vector(class_vector(10, 1, {{3, -1}, {6, -1}, {9, -1}}))};
  fx.picard = pic;
  fx.closed_form = ClosedForm::PenroseSmith;
  fx.scalar_recurrence = {1, -2, 0, 2, -1};
  fx.golden_degrees = {1, 2, 4, 8, 13, 20, 28, 38, 49, 62, 76, 92, 109};
  return fx;
}

inline Fixture make_dpi_plane() {
  const auto v = variables(3);
  const auto& x = v[0];
  const auto& y = v[1];
  const auto& z = v[2];
  const auto uv = variables(2);
  const auto& u = uv[0];
  const auto& w = uv[1];
  const MultiPoly one = MultiPoly::constant(2, 1);

  Fixture fx;
  fx.id = "ex2-dpi-plane";
  fx.description = "invariant plane at infinity of a discrete Painleve I map, ten blow-ups";
  auto& f = fx.map;
  f.name = fx.id;
  f.dimension = 2;
  f.variables = detail::xyz();
  f.components = {y * (y - z), x * z, (y - z) * (y - z)};
  f.inverse = std::vector<MultiPoly>{y * z, x * (x - z), (x - z) * (x - z)};
  const ProjectivePoint p1{0, 1, 0}, p2{1, 0, 1}, p3{0, 1, 1}, p4{1, 0, 0};
  f.critical_factors = {{"z", z, p2, "phi3"}, {"y-z", y - z, p1, "phi2"}};

  const std::vector<MultiPoly> keep_u{u, u * w};   // (u, v) -> (u, u v)
  const std::vector<MultiPoly> swap_u{u * w, u};   // (u, v) -> (u v, u)
  const std::vector<MultiPoly> pi1{u, one, u * w};
  const std::vector<MultiPoly> pi3{one, u * w, one - u};
  const std::vector<MultiPoly> pi6{u * w, one + u, one};
  const std::vector<MultiPoly> pi9{one, u, u * w};

  fx.charts.push_back(detail::make_chart("phi2", p1, {u, one, u * u * w}, ChartTower{{pi1, keep_u}}));
  fx.charts.push_back(detail::make_chart("phi3", p2, pi3));
  fx.charts.push_back(detail::make_chart("phi6", p3, pi6));
  fx.charts.push_back(detail::make_chart("phi5", p2, {one, u * u * u * w, one - u * u * w},
                                         ChartTower{{pi3, swap_u, keep_u}}));
  fx.charts.push_back(detail::make_chart("phi8", p3, {u * u * u * w, one + u * u * w, one},
                                         ChartTower{{pi6, swap_u, keep_u}}));
  fx.charts.push_back(detail::make_chart("phi10", p4, {one, u, u * u * w}, ChartTower{{pi9, keep_u}}));

  fx.recurrence = RecurrenceSystem{
      {"d", "phi2", "phi3", "phi5", "phi6", "phi8", "phi10"},
      to_int_matrix({{2, -1, -1, 0, 0, 0, 0},
                     {0, 0, -2, 1, 0, 0, 0},
                     {0, 0, 0, 0, 1, 0, 0},
                     {0, 0, 0, 0, 0, 1, 0},
                     {1, -1, 0, 0, 0, 0, 0},
                     {2, -2, 0, 0, 0, 0, 1},
                     {2, -1, -2, 0, 0, 0, 0}}),
      to_int_vector({1, 0, 0, 0, 0, 0, 0})};

  fx.mu_sources = {"phi2", "phi5", "phi8", "phi10"};
  fx.nu_mu = {{"phi2", {{1, 0}, {1, 1}}},
              {"phi3", {{1, 2}}},
              {"phi5", {{2, 2}, {1, 3}, {1, 4}}},
              {"phi6", {{1, 5}}},
              {"phi8", {{2, 5}, {1, 6}, {1, 7}}},
              {"phi10", {{1, 8}, {1, 9}}}};

  std::vector<std::vector<long>> mu(11, std::vector<long>(11, 0));
  mu[0] = {2, -1, -1, -1, 0, 0, 0, 0, 0, 0, 0};
  mu[1][4] = 1;
  mu[2][5] = 1;
  mu[3][6] = 1;
  mu[4][7] = 1;
  mu[5][8] = 1;
  mu[6] = {1, -1, -1, 0, 0, 0, 0, 0, 0, 0, 0};
  mu[7][9] = 1;
  mu[8][10] = 1;
  mu[9] = {1, 0, -1, -1, 0, 0, 0, 0, 0, 0, 0};
  mu[10] = {1, -1, 0, -1, 0, 0, 0, 0, 0, 0, 0};
  std::vector<std::string> mu_labels{"d"};
  for (int i = 1; i <= 10; ++i) mu_labels.push_back("mu" + std::to_string(i));
  fx.mu_recurrence = RecurrenceSystem{mu_labels, to_int_matrix(mu), to_int_vector({1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0})};

  using detail::class_vector;
  std::vector<std::vector<long>> push{
      class_vector(11, 2, {{1, -1}, {2, -1}, {3, -1}}),
      class_vector(11, 0, {{4, 1}}), class_vector(11, 0, {{5, 1}}), class_vector(11, 0, {{6, 1}}),
      class_vector(11, 0, {{7, 1}}), class_vector(11, 0, {{8, 1}}),
      class_vector(11, 1, {{1, -1}, {2, -1}}),
      class_vector(11, 0, {{9, 1}}), class_vector(11, 0, {{10, 1}}),
      class_vector(11, 1, {{2, -1}, {3, -1}}),
      class_vector(11, 1, {{1, -1}, {3, -1}})};
  PicardMatrix pic;
  pic.basis = detail::picard_basis(10);
  pic.matrix = detail::pullback_from_pushforward(push);
  pic.surface = true;
  pic.automorphism = true;
  // class of the invariant pencil, read off from its mu's
  pic.known_fixed_classes = {to_int_vector({4, -1, -1, -2, -1, -1, -2, -1, -1, -1, -1})};
  fx.picard = pic;

  fx.closed_form = ClosedForm::DpiPlane;
  fx.scalar_recurrence = {1, -2, 0, 1, 1, 0, -2, 1};
  fx.golden_degrees = {1, 2, 4, 7, 12, 18, 25, 34, 44, 55, 68, 82, 97, 114};
  fx.golden_indices = {{0, 0, 0, 0, 0, 0},       {0, 0, 1, 0, 2, 2},       {0, 1, 2, 2, 6, 4},
                       {0, 2, 4, 6, 12, 6},      {2, 4, 7, 12, 20, 10},    {4, 7, 10, 20, 30, 14},
                       {6, 10, 14, 30, 42, 18},  {10, 14, 19, 42, 56, 24}, {14, 19, 24, 56, 72, 30},
                       {18, 24, 30, 72, 90, 36}, {24, 30, 37, 90, 110, 44}, {30, 37, 44, 110, 132, 52},
                       {36, 44, 52, 132, 156, 60}, {44, 52, 61, 156, 182, 70}};
  fx.invariant = RationalInvariant{z * pow(x + y - z, 3), x * x * y * y};
  return fx;
}

inline Fixture make_linearizable() {
  const auto v = variables(3);
  const auto& x = v[0];
  const auto& y = v[1];
  const auto& z = v[2];
  const auto uv = variables(2);
  const auto& u = uv[0];
  const auto& w = uv[1];
  const MultiPoly one = MultiPoly::constant(2, 1);

  Fixture fx;
  fx.id = "ex3-linearizable";
  fx.description = "linearizable quadratic map, linear degree growth, not an automorphism";
  auto& f = fx.map;
  f.name = fx.id;
  f.dimension = 2;
  f.variables = detail::xyz();
  f.components = {x * (x - y + z) + (x - y) * z, x * (x - y + z), z * (x - y + z)};
  f.inverse = std::vector<MultiPoly>{y * (y - x + z), y * (y - x + z) + (y - x) * z, z * (y - x + z)};
  const ProjectivePoint p1{1, 0, 0}, p2{1, 1, 0};
  f.critical_factors = {{"z", z, p2, "phi3"}, {"x-y+z", x - y + z, p1, "phi1"}};

  fx.charts.push_back(detail::make_chart("phi1", p1, {one, u, u * w}));
  fx.charts.push_back(detail::make_chart("phi2", p2, {one + u * w, one, u}));
  fx.charts.push_back(detail::make_chart("phi3", p2, {one + u + u * u * w, one, u}));

  fx.recurrence = RecurrenceSystem{{"d", "phi1", "phi2", "phi3"},
                                   to_int_matrix({{2, -1, 0, -1}, {0, 0, 0, 0}, {1, -1, 1, -1}, {1, -1, 1, -1}}),
                                   to_int_vector({1, 0, 0, 0})};
  PicardMatrix pic;
  pic.basis = {"H", "E2"};
  pic.matrix = to_int_matrix({{2, 1}, {-1, 0}});
  pic.surface = true;
  pic.automorphism = false;
  fx.picard = pic;
  fx.closed_form = ClosedForm::Linear;
  fx.scalar_recurrence = {1, -2, 1};
  for (long n = 0; n <= 20; ++n) fx.golden_degrees.push_back(n + 1);
  return fx;
}

/// f = L1 o sigma o adj(L2) for fixed small integer matrices; no critical
/// line is degree lowering.
inline Fixture make_generic_quadratic() {
  const auto l1 = detail::mat3({{{1, 2, 0}, {0, 1, 3}, {2, 0, 1}}});
  const auto l2 = detail::mat3({{{1, 0, 1}, {1, 1, 0}, {0, 2, 1}}});
  const auto m = detail::adjugate(l2);
  const auto v = variables(3);

  Fixture fx;
  fx.id = "generic-quadratic";
  fx.description = "quadratic Cremona map in general position, degrees 2^n";
  auto& f = fx.map;
  f.name = fx.id;
  f.dimension = 2;
  f.variables = detail::xyz();
  f.components = detail::cremona(l1, m);
  f.inverse = detail::cremona(l2, detail::adjugate(l1));
  const auto lines = detail::apply_linear(m, v);
  for (int i = 0; i < 3; ++i) {
    const std::string id = "phi" + std::to_string(i + 1);
    fx.charts.push_back(sigma_chart(id, detail::column(l1, i)));
    f.critical_factors.push_back(
        {"K" + std::to_string(i + 1), primitive_part(lines[i]), detail::column(l1, i), id});
  }
  fx.recurrence = RecurrenceSystem{{"d"}, to_int_matrix({{2}}), to_int_vector({1})};
  PicardMatrix pic;
  pic.basis = {"H"};
  pic.matrix = to_int_matrix({{2}});
  pic.surface = true;
  pic.automorphism = false;
  fx.picard = pic;
  fx.closed_form = ClosedForm::PowerOfTwo;
  fx.scalar_recurrence = {1, -2};
  fx.golden_degrees = {1, 2, 4, 8, 16, 32, 64};
  return fx;
}

inline Fixture make_identity() {
  const auto v = variables(3);
  Fixture fx;
  fx.id = "identity";
  fx.description = "identity map of the plane";
  auto& f = fx.map;
  f.name = fx.id;
  f.dimension = 2;
  f.variables = detail::xyz();
  f.components = v;
  f.inverse = v;
  fx.recurrence = RecurrenceSystem{{"d"}, to_int_matrix({{1}}), to_int_vector({1})};
  PicardMatrix pic;
  pic.basis = {"H"};
  pic.matrix = to_int_matrix({{1}});
  pic.surface = true;
  pic.automorphism = true;
  pic.known_fixed_classes = {to_int_vector({1})};
  fx.picard = pic;
  fx.closed_form = ClosedForm::Constant;
  fx.scalar_recurrence = {1, -1};
  fx.golden_degrees = {1, 1, 1, 1, 1, 1, 1, 1, 1};
  return fx;
}

inline std::vector<std::string> builtin_fixture_ids() {
  return {"ex1-penrose-smith", "ex2-dpi-plane", "ex3-linearizable", "generic-quadratic", "identity"};
}

/// Builtin fixture by id. Parameters other than a for the Penrose-Smith map
/// are rejected.
inline Fixture builtin_fixture(const std::string& id,
                               const std::map<std::string, Rational>& params = {}) {
  for (const auto& [name, value] : params)
    if (id != "ex1-penrose-smith" || name != "a")
      fail(ErrorKind::Usage, "fixture " + id + " has no parameter '" + name + "'");
  if (id == "ex1-penrose-smith") {
    auto it = params.find("a");
    return make_penrose_smith(it == params.end() ? Rational(2) : it->second);
  }
  if (id == "ex2-dpi-plane") return make_dpi_plane();
  if (id == "ex3-linearizable") return make_linearizable();
  if (id == "generic-quadratic") return make_generic_quadratic();
  if (id == "identity") return make_identity();
  fail(ErrorKind::UnknownFixture, "no fixture named '" + id + "'");
}

}  // namespace birdeg
