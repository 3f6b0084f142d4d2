#pragma once

// JSON forms of polynomials, map descriptors, charts, Picard data and whole
// fixtures. Writing then reading any value gives it back unchanged, and the
// dump of a reloaded value is byte-identical to the original dump.

#include <cstddef>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "birdeg/blowup.hpp"
#include "birdeg/dynamics.hpp"
#include "birdeg/errors.hpp"
#include "birdeg/fixtures.hpp"
#include "birdeg/picard.hpp"
#include "birdeg/poly.hpp"
#include "birdeg/ratmap.hpp"

namespace birdeg::io {

using Json = nlohmann::ordered_json;

namespace detail {

inline const Json& field(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key))
    fail(ErrorKind::ParseError, std::string("missing field '") + key + "'");
  return j.at(key);
}

inline std::string get_string(const Json& j, const char* key) {
  const Json& v = field(j, key);
  if (!v.is_string()) fail(ErrorKind::ParseError, std::string("field '") + key + "' must be a string");
  return v.get<std::string>();
}

inline const Json& get_array(const Json& j, const char* key) {
  const Json& v = field(j, key);
  if (!v.is_array()) fail(ErrorKind::ParseError, std::string("field '") + key + "' must be an array");
  return v;
}

inline Rational rational_from(const Json& v) {
  if (v.is_string()) return parse_rational(v.get<std::string>());
  if (v.is_number_integer()) return Rational(Integer(v.dump()));
  fail(ErrorKind::ParseError, "rational must be a string or an integer");
}

// small integers as JSON numbers, anything wider as a decimal string
inline Json integer_to(const Integer& z) {
  if (z.fits_slong_p()) return Json(z.get_si());
  return Json(z.get_str());
}

inline Integer integer_from(const Json& v) {
  if (v.is_number_integer()) return Integer(v.dump());
  if (v.is_string()) {
    Integer z;
    if (z.set_str(v.get<std::string>(), 10) != 0) fail(ErrorKind::ParseError, "bad integer literal");
    return z;
  }
  fail(ErrorKind::ParseError, "integer must be a number or a string");
}

inline std::vector<std::string> default_names(std::size_t n, const std::string& stem) {
  if (stem == "u" && n == 2) return {"u", "v"};
  std::vector<std::string> out;
  for (std::size_t i = 0; i < n; ++i) out.push_back(stem + std::to_string(i + 1));
  return out;
}

}  // namespace detail

// ---- polynomials ---------------------------------------------------------

inline Json to_json(const MultiPoly& p, const std::vector<std::string>& names) {
  if (names.size() != p.nvars()) fail(ErrorKind::ArityMismatch, "variable names do not match arity");
  Json terms = Json::array();
  for (const auto& t : p.terms()) {
    Json e = Json::array();
    for (auto x : t.mono.exponents()) e.push_back(x);
    terms.push_back(Json{{"e", std::move(e)}, {"c", to_string(t.coef)}});
  }
  return Json{{"vars", names}, {"terms", std::move(terms)}};
}

/// Reads a polynomial; `expected_nvars` of 0 accepts any arity.
inline MultiPoly poly_from_json(const Json& j, std::size_t expected_nvars = 0) {
  const Json& vars = detail::get_array(j, "vars");
  const std::size_t n = vars.size();
  if (expected_nvars != 0 && n != expected_nvars)
    fail(ErrorKind::ArityMismatch, "polynomial has " + std::to_string(n) + " variables, expected " +
                                       std::to_string(expected_nvars));
  std::vector<Term> terms;
  for (const auto& t : detail::get_array(j, "terms")) {
    const Json& e = detail::get_array(t, "e");
    if (e.size() != n) fail(ErrorKind::ArityMismatch, "exponent vector length differs from vars");
    std::vector<Monomial::Exponent> exps;
    for (const auto& x : e) {
      if (!x.is_number_unsigned()) fail(ErrorKind::ParseError, "exponents must be nonnegative integers");
      exps.push_back(x.get<Monomial::Exponent>());
    }
    terms.push_back({Monomial(std::span<const Monomial::Exponent>(exps)), detail::rational_from(detail::field(t, "c"))});
  }
  return MultiPoly::from_terms(n, std::move(terms));
}

inline Json to_json(const std::vector<MultiPoly>& ps, const std::vector<std::string>& names) {
  Json out = Json::array();
  for (const auto& p : ps) out.push_back(to_json(p, names));
  return out;
}

inline std::vector<MultiPoly> polys_from_json(const Json& j, std::size_t expected_nvars = 0) {
  if (!j.is_array()) fail(ErrorKind::ParseError, "expected an array of polynomials");
  std::vector<MultiPoly> out;
  for (const auto& x : j) out.push_back(poly_from_json(x, expected_nvars));
  return out;
}

inline Json to_json(const ProjectivePoint& p) {
  Json out = Json::array();
  for (const auto& c : p.coords()) out.push_back(to_string(c));
  return out;
}

inline ProjectivePoint point_from_json(const Json& j) {
  if (!j.is_array()) fail(ErrorKind::ParseError, "a point is an array of coordinates");
  std::vector<Rational> c;
  for (const auto& x : j) c.push_back(detail::rational_from(x));
  return ProjectivePoint(std::move(c));
}

// ---- maps -----------------------------------------------------------------

inline Json to_json(const BirationalMapDescriptor& f) {
  const auto& names = f.variables;
  Json out{{"name", f.name}, {"dimension", f.dimension}, {"variables", names},
           {"components", to_json(f.components, names)}};
  Json factors = Json::array();
  for (const auto& k : f.critical_factors)
    factors.push_back(Json{{"id", k.id}, {"K", to_json(k.K, names)}, {"target", to_json(k.target)},
                           {"chartRef", k.chart_ref}});
  out["criticalFactors"] = std::move(factors);
  if (f.inverse) out["inverse"] = to_json(*f.inverse, names);
  if (!f.parametrizations.empty()) {
    Json params = Json::object();
    for (const auto& [id, coords] : f.parametrizations) {
      const auto pn = detail::default_names(coords.empty() ? 0 : coords.front().nvars(), "s");
      params[id] = to_json(coords, pn);
    }
    out["parametrizations"] = std::move(params);
  }
  return out;
}

inline BirationalMapDescriptor map_from_json(const Json& j) {
  BirationalMapDescriptor f;
  f.name = detail::get_string(j, "name");
  const Json& dim = detail::field(j, "dimension");
  if (!dim.is_number_unsigned() || dim.get<std::size_t>() == 0)
    fail(ErrorKind::InvalidDescriptor, "dimension must be a positive integer");
  f.dimension = dim.get<std::size_t>();
  for (const auto& v : detail::get_array(j, "variables")) f.variables.push_back(v.get<std::string>());
  if (f.variables.size() != f.nvars())
    fail(ErrorKind::DimensionMismatch, "expected " + std::to_string(f.nvars()) + " variable names");
  f.components = polys_from_json(detail::get_array(j, "components"), f.nvars());
  for (const auto& k : detail::get_array(j, "criticalFactors"))
    f.critical_factors.push_back({detail::get_string(k, "id"), poly_from_json(detail::field(k, "K"), f.nvars()),
                                  point_from_json(detail::field(k, "target")),
                                  detail::get_string(k, "chartRef")});
  if (j.contains("inverse")) f.inverse = polys_from_json(j.at("inverse"), f.nvars());
  if (j.contains("parametrizations")) {
    const Json& params = j.at("parametrizations");
    if (!params.is_object()) fail(ErrorKind::ParseError, "parametrizations must be an object");
    for (const auto& [id, coords] : params.items()) f.parametrizations[id] = polys_from_json(coords);
  }
  return f;
}

// ---- charts -----------------------------------------------------------------

inline Json to_json(const Chart& c) {
  const auto names = detail::default_names(c.arity(), "u");
  Json out{{"id", c.id}, {"center", to_json(c.center)}, {"coords", to_json(c.coords, names)},
           {"excVar", c.exceptional + 1}};
  if (c.tower) {
    Json steps = Json::array();
    for (const auto& step : c.tower->steps) {
      const auto sn = detail::default_names(step.empty() ? 0 : step.front().nvars(), "u");
      steps.push_back(to_json(step, sn));
    }
    out["tower"] = std::move(steps);
  }
  return out;
}

inline Chart chart_from_json(const Json& j) {
  Chart c;
  c.id = detail::get_string(j, "id");
  c.center = point_from_json(detail::field(j, "center"));
  c.coords = polys_from_json(detail::get_array(j, "coords"));
  const Json& exc = detail::field(j, "excVar");
  if (!exc.is_number_unsigned() || exc.get<std::size_t>() == 0)
    fail(ErrorKind::InvalidChart, c.id + ": excVar is 1-based");
  c.exceptional = exc.get<std::size_t>() - 1;
  if (j.contains("tower")) {
    ChartTower tower;
    for (const auto& step : j.at("tower")) tower.steps.push_back(polys_from_json(step));
    c.tower = std::move(tower);
  }
  return c;
}

inline Json to_json(const std::vector<Chart>& charts) {
  Json out = Json::array();
  for (const auto& c : charts) out.push_back(to_json(c));
  return out;
}

inline std::vector<Chart> charts_from_json(const Json& j) {
  std::vector<Chart> out;
  if (j.is_object()) {
    out.push_back(chart_from_json(j));
    return out;
  }
  if (!j.is_array()) fail(ErrorKind::ParseError, "expected a chart or an array of charts");
  for (const auto& c : j) out.push_back(chart_from_json(c));
  return out;
}

// ---- integer data -----------------------------------------------------------

inline Json to_json(const IntVector& v) {
  Json out = Json::array();
  for (const auto& x : v) out.push_back(detail::integer_to(x));
  return out;
}

inline IntVector int_vector_from_json(const Json& j) {
  if (!j.is_array()) fail(ErrorKind::ParseError, "expected an integer array");
  IntVector v;
  for (const auto& x : j) v.push_back(detail::integer_from(x));
  return v;
}

inline Json to_json(const IntMatrix& m) {
  Json out = Json::array();
  for (const auto& row : m) out.push_back(to_json(row));
  return out;
}

inline IntMatrix int_matrix_from_json(const Json& j) {
  if (!j.is_array()) fail(ErrorKind::ParseError, "expected an array of rows");
  IntMatrix m;
  for (const auto& row : j) m.push_back(int_vector_from_json(row));
  return m;
}

inline Json to_json(const PicardMatrix& m) {
  Json fixed = Json::array();
  for (const auto& v : m.known_fixed_classes) fixed.push_back(to_json(v));
  return Json{{"basis", m.basis},          {"matrix", to_json(m.matrix)},
              {"surface", m.surface},      {"automorphism", m.automorphism},
              {"knownFixedClasses", fixed}};
}

inline PicardMatrix picard_from_json(const Json& j) {
  PicardMatrix m;
  for (const auto& b : detail::get_array(j, "basis")) m.basis.push_back(b.get<std::string>());
  m.matrix = int_matrix_from_json(detail::field(j, "matrix"));
  if (j.contains("surface")) m.surface = j.at("surface").get<bool>();
  if (j.contains("automorphism")) m.automorphism = j.at("automorphism").get<bool>();
  if (j.contains("knownFixedClasses"))
    for (const auto& v : j.at("knownFixedClasses")) m.known_fixed_classes.push_back(int_vector_from_json(v));
  validate_picard(m);
  return m;
}

inline Json to_json(const RecurrenceSystem& r) {
  return Json{{"labels", r.labels}, {"matrix", to_json(r.matrix)}, {"initial", to_json(r.initial)}};
}

inline RecurrenceSystem recurrence_from_json(const Json& j) {
  RecurrenceSystem r;
  for (const auto& l : detail::get_array(j, "labels")) r.labels.push_back(l.get<std::string>());
  r.matrix = int_matrix_from_json(detail::field(j, "matrix"));
  r.initial = int_vector_from_json(detail::field(j, "initial"));
  validate_recurrence(r);
  return r;
}

// ---- fixtures ---------------------------------------------------------------

inline Json to_json(const Fixture& fx) {
  Json out{{"id", fx.id}, {"description", fx.description}, {"map", to_json(fx.map)},
           {"charts", to_json(fx.charts)}};
  if (fx.recurrence) out["recurrence"] = to_json(*fx.recurrence);
  if (fx.picard) out["picard"] = to_json(*fx.picard);
  out["closedForm"] = std::string(to_string(fx.closed_form));
  out["scalarRecurrence"] = fx.scalar_recurrence;
  out["goldenDegrees"] = fx.golden_degrees;
  out["goldenIndices"] = fx.golden_indices;
  out["muSources"] = fx.mu_sources;
  Json rels = Json::array();
  for (const auto& rel : fx.nu_mu) {
    Json terms = Json::array();
    for (const auto& t : rel.terms) terms.push_back(Json{{"coef", t.coefficient}, {"mu", t.position + 1}});
    rels.push_back(Json{{"chart", rel.chart_id}, {"terms", std::move(terms)}});
  }
  out["nuMu"] = std::move(rels);
  if (fx.mu_recurrence) out["muRecurrence"] = to_json(*fx.mu_recurrence);
  if (fx.invariant)
    out["invariant"] = Json{{"numerator", to_json(fx.invariant->numerator, fx.map.variables)},
                            {"denominator", to_json(fx.invariant->denominator, fx.map.variables)}};
  out["params"] = fx.params;
  return out;
}

inline Fixture fixture_from_json(const Json& j) {
  Fixture fx;
  fx.id = detail::get_string(j, "id");
  if (j.contains("description")) fx.description = j.at("description").get<std::string>();
  fx.map = map_from_json(detail::field(j, "map"));
  fx.charts = charts_from_json(detail::get_array(j, "charts"));
  if (j.contains("recurrence")) fx.recurrence = recurrence_from_json(j.at("recurrence"));
  if (j.contains("picard")) fx.picard = picard_from_json(j.at("picard"));
  if (j.contains("closedForm")) fx.closed_form = closed_form_from_string(j.at("closedForm").get<std::string>());
  if (j.contains("scalarRecurrence")) fx.scalar_recurrence = j.at("scalarRecurrence").get<std::vector<long>>();
  if (j.contains("goldenDegrees")) fx.golden_degrees = j.at("goldenDegrees").get<std::vector<long>>();
  if (j.contains("goldenIndices"))
    fx.golden_indices = j.at("goldenIndices").get<std::vector<std::vector<long>>>();
  if (j.contains("muSources")) fx.mu_sources = j.at("muSources").get<std::vector<std::string>>();
  if (j.contains("nuMu"))
    for (const auto& rel : j.at("nuMu")) {
      NuMuRelation r{detail::get_string(rel, "chart"), {}};
      for (const auto& t : detail::get_array(rel, "terms")) {
        const auto pos = detail::field(t, "mu").get<long>();
        if (pos < 1) fail(ErrorKind::ParseError, "mu positions are 1-based");
        r.terms.push_back({detail::field(t, "coef").get<long>(), static_cast<std::size_t>(pos - 1)});
      }
      fx.nu_mu.push_back(std::move(r));
    }
  if (j.contains("muRecurrence")) fx.mu_recurrence = recurrence_from_json(j.at("muRecurrence"));
  if (j.contains("invariant"))
    fx.invariant = RationalInvariant{poly_from_json(detail::field(j.at("invariant"), "numerator"), fx.map.nvars()),
                                     poly_from_json(detail::field(j.at("invariant"), "denominator"), fx.map.nvars())};
  if (j.contains("params")) fx.params = j.at("params").get<std::map<std::string, std::string>>();
  return fx;
}

// ---- files ------------------------------------------------------------------

inline Json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorKind::ParseError, "cannot open " + path.string());
  try {
    return Json::parse(in);
  } catch (const Json::exception& e) {
    fail(ErrorKind::ParseError, path.string() + ": " + e.what());
  }
}

inline void write_json_file(const std::filesystem::path& path, const Json& j) {
  std::ofstream out(path);
  if (!out) fail(ErrorKind::ParseError, "cannot write " + path.string());
  out << j.dump(2) << '\n';
}

inline BirationalMapDescriptor load_map(const std::filesystem::path& path) {
  try {
    return map_from_json(read_json_file(path));
  } catch (const Json::exception& e) {
    fail(ErrorKind::ParseError, path.string() + ": " + e.what());
  }
}

inline std::vector<Chart> load_charts(const std::filesystem::path& path) {
  try {
    return charts_from_json(read_json_file(path));
  } catch (const Json::exception& e) {
    fail(ErrorKind::ParseError, path.string() + ": " + e.what());
  }
}

inline PicardMatrix load_picard(const std::filesystem::path& path) {
  try {
    return picard_from_json(read_json_file(path));
  } catch (const Json::exception& e) {
    fail(ErrorKind::ParseError, path.string() + ": " + e.what());
  }
}

inline Fixture load_fixture(const std::filesystem::path& path) {
  try {
    return fixture_from_json(read_json_file(path));
  } catch (const Json::exception& e) {
    fail(ErrorKind::ParseError, path.string() + ": " + e.what());
  }
}

}  // namespace birdeg::io
