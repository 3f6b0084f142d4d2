#pragma once

// Blow-up charts given as polynomial coordinate substitutions, and the
// indices read off from them.

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "birdeg/errors.hpp"
#include "birdeg/poly.hpp"
#include "birdeg/projective.hpp"

namespace birdeg {

/// Elementary substitutions of a tower. The first step gives the N+1
/// homogeneous coordinates in N fresh variables; each later step expresses
/// the previous step's N variables in N fresh ones. Variable 0 of every step
/// is its exceptional variable.
struct ChartTower {
  std::vector<std::vector<MultiPoly>> steps;

  friend bool operator==(const ChartTower&, const ChartTower&) = default;
};

struct Chart {
  std::string id;
  ProjectivePoint center;
  std::vector<MultiPoly> coords;   // N+1 polynomials in N affine variables
  std::size_t exceptional = 0;     // index of the exceptional variable
  std::optional<ChartTower> tower;

  [[nodiscard]] std::size_t arity() const { return coords.empty() ? 0 : coords.front().nvars(); }

  friend bool operator==(const Chart&, const Chart&) = default;
};

/// Flattened coordinate functions of a tower.
inline std::vector<MultiPoly> compose_tower(const ChartTower& tower) {
  if (tower.steps.empty()) fail(ErrorKind::InvalidChart, "empty chart tower");
  std::vector<MultiPoly> coords = tower.steps.front();
  for (std::size_t k = 1; k < tower.steps.size(); ++k) {
    const auto& step = tower.steps[k];
    if (coords.empty() || step.size() != coords.front().nvars())
      fail(ErrorKind::InvalidChart, "tower step " + std::to_string(k) + " has the wrong arity");
    for (auto& c : coords) c = substitute(c, step);
  }
  return coords;
}

/// Checks that the chart sits over its center and is an affine patch; towers
/// must compose to the declared coordinates.
inline void validate_chart(const Chart& chart) {
  const std::size_t n = chart.coords.size();
  if (n < 2) fail(ErrorKind::InvalidChart, chart.id + ": too few coordinate functions");
  if (chart.center.size() != n)
    fail(ErrorKind::InvalidChart, chart.id + ": center has the wrong dimension");
  const std::size_t nv = chart.arity();
  if (nv + 1 != n) fail(ErrorKind::InvalidChart, chart.id + ": expected N affine variables");
  for (const auto& c : chart.coords)
    if (c.nvars() != nv) fail(ErrorKind::InvalidChart, chart.id + ": mixed variable counts");
  if (chart.exceptional >= nv) fail(ErrorKind::InvalidChart, chart.id + ": bad exceptional variable");

  bool has_unit = false;
  for (const auto& c : chart.coords)
    if (c.is_constant() && c.constant_value() == 1) has_unit = true;
  if (!has_unit) fail(ErrorKind::InvalidChart, chart.id + ": no coordinate is the constant 1");

  std::vector<MultiPoly> restrict;
  for (std::size_t i = 0; i < nv; ++i)
    restrict.push_back(i == chart.exceptional ? MultiPoly(nv) : MultiPoly::variable(nv, i));
  std::vector<MultiPoly> at_zero;
  for (const auto& c : chart.coords) at_zero.push_back(substitute(c, restrict));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      MultiPoly minor = at_zero[i] * chart.center[j] - at_zero[j] * chart.center[i];
      if (!minor.is_zero())
        fail(ErrorKind::InvalidChart, chart.id + ": exceptional locus does not map to the center " +
                                          to_string(chart.center));
    }

  if (chart.tower) {
    if (chart.exceptional != 0) fail(ErrorKind::InvalidChart, chart.id + ": towers use variable 0");
    if (compose_tower(*chart.tower) != chart.coords)
      fail(ErrorKind::InvalidChart, chart.id + ": tower does not compose to the chart");
  }
}

/// Standard sigma-process chart at p: affine patch at the first nonzero
/// coordinate a, then x_{r1} = p_{r1} + u1 and x_{rk} = p_{rk} + u1*uk.
inline Chart sigma_chart(std::string id, const ProjectivePoint& p) {
  const std::size_t n = p.size();
  const std::size_t nv = n - 1;
  const std::size_t a = p.pivot();
  Chart chart;
  chart.id = std::move(id);
  chart.center = p;
  const auto u = variables(nv);
  std::size_t k = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (i == a) {
      chart.coords.push_back(MultiPoly::constant(nv, 1));
      continue;
    }
    MultiPoly offset = MultiPoly::constant(nv, p[i]);
    chart.coords.push_back(k == 0 ? offset + u[0] : offset + u[0] * u[k]);
    ++k;
  }
  return chart;
}

/// Power of the exceptional variable dividing P composed with the chart.
inline int local_index(const Chart& chart, const MultiPoly& p) {
  if (p.nvars() != chart.coords.size())
    fail(ErrorKind::ArityMismatch, chart.id + ": polynomial has the wrong number of variables");
  const bool planar = !chart.coords.empty() && chart.coords.front().nvars() == 2 && chart.exceptional < 2;
  if (planar && p.size() > 8 && p.is_homogeneous()) {
    const auto v = detail::dense_valuation(p, chart.coords, chart.exceptional);
    if (!v) fail(ErrorKind::ZeroComposition, "P vanishes identically on chart " + chart.id);
    return static_cast<int>(*v);
  }
  MultiPoly q = substitute(p, chart.coords);
  if (q.is_zero()) fail(ErrorKind::ZeroComposition, "P vanishes identically on chart " + chart.id);
  return static_cast<int>(q.min_exponent(chart.exceptional));
}

/// mu_1(P), ..., mu_m(P): peel P through the elementary blow-ups, stripping
/// the exceptional power at each step.
inline std::vector<int> elementary_indices(const ChartTower& tower, const MultiPoly& p) {
  if (tower.steps.empty()) fail(ErrorKind::InvalidChart, "empty chart tower");
  if (p.nvars() != tower.steps.front().size())
    fail(ErrorKind::ArityMismatch, "polynomial arity does not match the tower");
  std::vector<int> mus;
  MultiPoly current = p;
  for (const auto& step : tower.steps) {
    current = substitute(current, step);
    if (current.is_zero()) fail(ErrorKind::ZeroComposition, "P vanishes on an elementary chart");
    const auto mu = current.min_exponent(0);
    current = divide_by_variable_power(current, 0, mu);
    mus.push_back(static_cast<int>(mu));
  }
  return mus;
}

/// One term of a nu/mu relation: coefficient times mu at a 0-based position.
struct MuTerm {
  long coefficient;
  std::size_t position;

  friend bool operator==(const MuTerm&, const MuTerm&) = default;
};

inline long nu_from_mu(const std::vector<MuTerm>& relation, const std::vector<int>& mus) {
  long out = 0;
  for (const auto& t : relation) {
    if (t.position >= mus.size()) fail(ErrorKind::DimensionMismatch, "mu position out of range");
    out += t.coefficient * mus[t.position];
  }
  return out;
}

/// Multiplicity of the hypersurface {P=0} at p: lowest total degree of P in
/// affine coordinates centred at p.
inline int multiplicity_at_point(const MultiPoly& p, const ProjectivePoint& point) {
  if (p.is_zero()) fail(ErrorKind::ZeroPolynomial, "multiplicity of the zero polynomial");
  const std::size_t n = point.size();
  if (p.nvars() != n) fail(ErrorKind::ArityMismatch, "point and polynomial dimensions differ");
  const std::size_t a = point.pivot();
  const auto t = variables(n - 1);
  std::vector<MultiPoly> images;
  std::size_t k = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (i == a) {
      images.push_back(MultiPoly::constant(n - 1, 1));
    } else {
      images.push_back(MultiPoly::constant(n - 1, point[i]) + t[k++]);
    }
  }
  MultiPoly shifted = substitute(p, images);
  if (shifted.is_zero()) fail(ErrorKind::ZeroComposition, "P vanishes on the affine patch");
  return static_cast<int>(shifted.terms().back().mono.degree());
}

inline const Chart& find_chart(const std::vector<Chart>& charts, const std::string& id) {
  for (const auto& c : charts)
    if (c.id == id) return c;
  fail(ErrorKind::InvalidDescriptor, "unknown chart '" + id + "'");
}

}  // namespace birdeg
