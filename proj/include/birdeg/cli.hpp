#pragma once

// Command-line front end. Every command is a function from a RunConfig to an
// exit code so tests can drive it without a process: 0 ok, 1 usage or load
// error, 2 verification or agreement failure.

#include <chrono>
#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "birdeg/dynamics.hpp"
#include "birdeg/errors.hpp"
#include "birdeg/fixtures.hpp"
#include "birdeg/io.hpp"
#include "birdeg/picard.hpp"
#include "birdeg/ratmap.hpp"

namespace birdeg::cli {

enum class Method { Oracle, Indices, Recurrence, Picard, ClosedForm };

inline std::string_view to_string(Method m) {
  switch (m) {
    case Method::Oracle: return "oracle";
    case Method::Indices: return "indices";
    case Method::Recurrence: return "recurrence";
    case Method::Picard: return "picard";
    case Method::ClosedForm: return "closed-form";
  }
  return "?";
}

inline std::vector<Method> parse_methods(const std::string& list) {
  std::vector<Method> out;
  std::stringstream ss(list);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    bool found = false;
    for (auto m : {Method::Oracle, Method::Indices, Method::Recurrence, Method::Picard, Method::ClosedForm})
      if (to_string(m) == item) {
        if (std::find(out.begin(), out.end(), m) == out.end()) out.push_back(m);
        found = true;
      }
    if (!found) fail(ErrorKind::Usage, "unknown method '" + item + "'");
  }
  return out;
}

struct RunConfig {
  std::optional<std::string> fixture;
  std::optional<std::filesystem::path> map_path, charts_path, picard_path;
  int n_max = 0;
  std::vector<Method> methods{Method::Indices};
  std::uint64_t seed = 1;
  std::string format = "csv";
  std::optional<std::filesystem::path> out;
  std::map<std::string, std::string> params;
  std::string action;  // picard sub-action
};

inline void check_config(const RunConfig& cfg) {
  if (cfg.n_max < 1) fail(ErrorKind::Usage, "--n must be at least 1");
  if (cfg.methods.empty()) fail(ErrorKind::Usage, "at least one method is required");
  if (cfg.format != "csv" && cfg.format != "json") fail(ErrorKind::Usage, "--format is csv or json");
}

// ---- fixture registry -------------------------------------------------------

inline std::optional<std::filesystem::path> fixture_dir() {
  if (const char* dir = std::getenv("BIRDEG_FIXTURE_DIR"); dir && *dir) return std::filesystem::path(dir);
  return std::nullopt;
}

inline std::vector<std::string> list_fixture_ids() {
  std::vector<std::string> ids = builtin_fixture_ids();
  if (auto dir = fixture_dir(); dir && std::filesystem::is_directory(*dir)) {
    std::vector<std::string> extra;
    for (const auto& entry : std::filesystem::directory_iterator(*dir)) {
      const auto& p = entry.path();
      if (p.extension() != ".json") continue;
      const auto stem = p.stem().string();
      if (std::find(ids.begin(), ids.end(), stem) == ids.end()) extra.push_back(stem);
    }
    std::sort(extra.begin(), extra.end());
    ids.insert(ids.end(), extra.begin(), extra.end());
  }
  return ids;
}

/// Fixture by id: BIRDEG_FIXTURE_DIR/<id>.json when present, else builtin.
inline Fixture resolve_fixture(const std::string& id, const std::map<std::string, std::string>& params) {
  if (auto dir = fixture_dir()) {
    const auto path = *dir / (id + ".json");
    if (std::filesystem::exists(path)) {
      if (!params.empty()) fail(ErrorKind::Usage, "--param applies only to builtin fixtures");
      return io::load_fixture(path);
    }
  }
  std::map<std::string, Rational> values;
  for (const auto& [k, v] : params) values[k] = parse_rational(v);
  auto fx = builtin_fixture(id, values);
  if (auto it = values.find("a"); it != values.end() && it->second == 0)
    fail(ErrorKind::Usage, "parameter a must be nonzero");
  return fx;
}

inline Fixture load_config_fixture(const RunConfig& cfg) {
  if (cfg.fixture) {
    if (cfg.map_path || cfg.charts_path || cfg.picard_path)
      fail(ErrorKind::Usage, "--fixture excludes --map/--charts/--picard");
    return resolve_fixture(*cfg.fixture, cfg.params);
  }
  if (!cfg.params.empty()) fail(ErrorKind::Usage, "--param needs --fixture");
  Fixture fx;
  if (cfg.map_path) {
    fx.map = io::load_map(*cfg.map_path);
    fx.id = fx.map.name;
    if (cfg.charts_path) fx.charts = io::load_charts(*cfg.charts_path);
  } else if (cfg.charts_path) {
    fail(ErrorKind::Usage, "--charts needs --map");
  }
  if (cfg.picard_path) {
    fx.picard = io::load_picard(*cfg.picard_path);
    if (fx.id.empty()) fx.id = cfg.picard_path->stem().string();
  }
  if (!cfg.map_path && !cfg.picard_path) fail(ErrorKind::Usage, "give --fixture, --map or --picard");
  return fx;
}

// ---- reports ----------------------------------------------------------------

struct DegreeSequenceReport {
  Method method = Method::Indices;
  std::vector<long> degrees;                 // n = 0, 1, ...
  std::vector<std::string> charts;           // index columns, indices method only
  std::vector<std::vector<long>> indices;
  std::optional<std::string> p0;
  int redraws = 0;
  double seconds = 0.0;
};

inline std::vector<long> to_longs(const std::vector<Integer>& xs) {
  std::vector<long> out;
  for (const auto& x : xs) {
    if (!x.fits_slong_p()) fail(ErrorKind::DimensionMismatch, "degree does not fit in a machine word");
    out.push_back(x.get_si());
  }
  return out;
}

inline DegreeSequenceReport run_method(const Fixture& fx, Method m, int n, std::uint64_t seed) {
  const auto start = std::chrono::steady_clock::now();
  DegreeSequenceReport r;
  r.method = m;
  switch (m) {
    case Method::Oracle:
      if (fx.map.components.empty()) fail(ErrorKind::Usage, "oracle needs a map");
      r.degrees = oracle_degrees(fx.map, n);
      break;
    case Method::Indices: {
      if (fx.map.components.empty()) fail(ErrorKind::Usage, "indices needs a map");
      auto run = iterate_indices_generic(fx.map, fx.charts, fx.tracked(), n, seed);
      r.degrees = degrees_of(run.states);
      r.charts = fx.tracked();
      for (const auto& st : run.states) {
        std::vector<long> row;
        for (const auto& [id, nu] : st.nu) row.push_back(nu);
        r.indices.push_back(std::move(row));
      }
      r.p0 = to_string(run.p0, fx.map.variables);
      r.redraws = run.redraws;
      break;
    }
    case Method::Recurrence:
      if (!fx.recurrence) fail(ErrorKind::Usage, fx.id + " has no recurrence system");
      r.degrees = recurrence_degrees(*fx.recurrence, n);
      break;
    case Method::Picard: {
      if (!fx.picard) fail(ErrorKind::Usage, fx.id + " has no Picard matrix");
      IntMatrix power = identity_matrix(fx.picard->size());
      for (int k = 0; k <= n; ++k) {
        if (!power[0][0].fits_slong_p()) fail(ErrorKind::DimensionMismatch, "degree overflow");
        r.degrees.push_back(power[0][0].get_si());
        power = multiply(power, fx.picard->matrix);
      }
      break;
    }
    case Method::ClosedForm: {
      if (fx.closed_form == ClosedForm::None) fail(ErrorKind::Usage, fx.id + " has no closed form");
      std::vector<Integer> vals;
      for (int k = 0; k <= n; ++k) vals.push_back(closed_form_value(fx.closed_form, k));
      r.degrees = to_longs(vals);
      break;
    }
  }
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return r;
}

inline void write_csv(std::ostream& os, const DegreeSequenceReport& r, bool with_indices = true) {
  os << "n,d";
  if (with_indices)
    for (const auto& c : r.charts) os << ',' << c;
  os << '\n';
  for (std::size_t n = 0; n < r.degrees.size(); ++n) {
    os << n << ',' << r.degrees[n];
    if (with_indices && n < r.indices.size())
      for (auto v : r.indices[n]) os << ',' << v;
    os << '\n';
  }
}

inline io::Json to_json(const DegreeSequenceReport& r) {
  io::Json j{{"method", std::string(to_string(r.method))}, {"degrees", r.degrees}};
  if (!r.charts.empty() || r.method == Method::Indices) {
    j["charts"] = r.charts;
    j["indices"] = r.indices;
  }
  if (r.p0) {
    j["p0"] = *r.p0;
    j["redraws"] = r.redraws;
  }
  j["seconds"] = r.seconds;
  return j;
}

// Writes to --out when given, else to the stream.
template <class Fn>
void emit(const RunConfig& cfg, std::ostream& os, Fn&& body) {
  if (cfg.out) {
    std::ofstream file(*cfg.out);
    if (!file) fail(ErrorKind::Usage, "cannot write " + cfg.out->string());
    body(file);
  } else {
    body(os);
  }
}

struct Disagreement {
  std::size_t n;
  std::string what;
};

inline std::optional<Disagreement> first_disagreement(const std::vector<DegreeSequenceReport>& reports) {
  std::size_t len = SIZE_MAX;
  for (const auto& r : reports) len = std::min(len, r.degrees.size());
  for (std::size_t n = 0; n < len; ++n)
    for (std::size_t i = 1; i < reports.size(); ++i)
      if (reports[i].degrees[n] != reports[0].degrees[n])
        return Disagreement{n, std::string(to_string(reports[0].method)) + "=" +
                                   std::to_string(reports[0].degrees[n]) + " " +
                                   std::string(to_string(reports[i].method)) + "=" +
                                   std::to_string(reports[i].degrees[n])};
  return std::nullopt;
}

inline std::optional<Disagreement> golden_mismatch(const Fixture& fx, const DegreeSequenceReport& r) {
  for (std::size_t n = 0; n < r.degrees.size() && n < fx.golden_degrees.size(); ++n)
    if (r.degrees[n] != fx.golden_degrees[n])
      return Disagreement{n, std::string(to_string(r.method)) + " d=" + std::to_string(r.degrees[n]) +
                                 " golden d=" + std::to_string(fx.golden_degrees[n])};
  if (r.method == Method::Indices)
    for (std::size_t n = 0; n < r.indices.size() && n < fx.golden_indices.size(); ++n)
      if (fx.golden_indices[n].size() == r.indices[n].size() && fx.golden_indices[n] != r.indices[n])
        return Disagreement{n, "index row differs from the golden table"};
  return std::nullopt;
}

inline bool has_golden(const Fixture& fx) { return !fx.params.count("a") || fx.params.at("a") == "2"; }

// ---- commands -----------------------------------------------------------------

inline int cmd_degree_seq(const RunConfig& cfg, std::ostream& os, std::ostream& err) {
  Fixture fx;
  try {
    check_config(cfg);
    fx = load_config_fixture(cfg);
    if (!fx.map.components.empty()) validate_descriptor(fx.map, fx.charts);
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
  std::vector<DegreeSequenceReport> reports;
  try {
    for (auto m : cfg.methods) reports.push_back(run_method(fx, m, cfg.n_max, cfg.seed));
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return e.kind() == ErrorKind::Usage ? 1 : 2;
  }
  const auto disagreement = first_disagreement(reports);
  std::optional<Disagreement> golden;
  if (has_golden(fx))
    for (const auto& r : reports)
      if (!golden) golden = golden_mismatch(fx, r);

  emit(cfg, os, [&](std::ostream& o) {
    if (cfg.format == "json") {
      io::Json j{{"fixture", fx.id}, {"nMax", cfg.n_max}, {"seed", cfg.seed}};
      io::Json arr = io::Json::array();
      for (const auto& r : reports) arr.push_back(to_json(r));
      j["reports"] = std::move(arr);
      j["agree"] = !disagreement;
      j["golden"] = !golden;
      o << j.dump(2) << '\n';
    } else {
      for (const auto& r : reports) {
        if (reports.size() > 1) o << "# method=" << to_string(r.method) << '\n';
        write_csv(o, r);
      }
    }
  });
  if (disagreement) {
    err << "methods disagree at n=" << disagreement->n << ": " << disagreement->what << '\n';
    return 2;
  }
  if (golden) {
    err << "golden table mismatch at n=" << golden->n << ": " << golden->what << '\n';
    return 2;
  }
  return 0;
}

inline int cmd_indices(RunConfig cfg, std::ostream& os, std::ostream& err) {
  cfg.methods = {Method::Indices};
  return cmd_degree_seq(cfg, os, err);
}

struct CheckResult {
  std::string name;
  bool pass = false;
  std::string detail;
};

inline std::vector<CheckResult> verify_checks(const Fixture& fx) {
  std::vector<CheckResult> out;
  auto check = [&](const std::string& name, auto&& body) {
    CheckResult r{name, false, ""};
    try {
      r.detail = body();
      r.pass = true;
    } catch (const Error& e) {
      r.detail = e.what();
    }
    out.push_back(std::move(r));
  };
  const auto& f = fx.map;
  if (!f.components.empty()) {
    check("descriptor", [&] {
      validate_shape(f);
      return "degree " + std::to_string(f.degree());
    });
    for (const auto& c : fx.charts)
      check("chart " + c.id, [&] {
        validate_chart(c);
        return "centre " + to_string(c.center);
      });
    check("critical factors", [&] {
      auto fe = verify_critical_factors(f);
      std::string s = "det J = " + fe.scalar.get_str();
      for (const auto& [id, e] : fe.exponents) s += " * " + id + "^" + std::to_string(e);
      return s;
    });
    if (f.inverse) check("inverse", [&] { return "K+ = " + to_string(verify_inverse(f), f.variables); });
    for (const auto& k : f.critical_factors) {
      check("target " + k.id, [&] {
        const auto& chart = find_chart(fx.charts, k.chart_ref);
        if (chart.center != k.target)
          fail(ErrorKind::TargetMismatch, "chart " + chart.id + " is centred at " + to_string(chart.center));
        return to_string(k.target);
      });
      check("contraction " + k.id, [&] { return "{" + k.id + "=0} -> " + to_string(contraction_check(f, k.id)); });
      check("orbit " + k.id, [&] {
        auto orbit = orbit_until_indeterminate(f, k.target, 8);
        return orbit.hit ? "reaches I(f) after " + std::to_string(orbit.steps) + " steps"
                         : std::string("stays outside I(f) for 8 steps");
      });
    }
    if (fx.invariant)
      check("invariant", [&] {
        if (!verify_rational_invariant(f, fx.invariant->numerator, fx.invariant->denominator))
          fail(ErrorKind::CrossCheckMismatch, "h o f != h");
        return to_string(fx.invariant->numerator, f.variables) + " / " +
               to_string(fx.invariant->denominator, f.variables);
      });
  }
  if (fx.recurrence && !fx.golden_degrees.empty())
    check("recurrence", [&] {
      const int n = static_cast<int>(fx.golden_degrees.size()) - 1;
      if (recurrence_degrees(*fx.recurrence, n) != fx.golden_degrees)
        fail(ErrorKind::CrossCheckMismatch, "recurrence does not give the golden degrees");
      return "matches " + std::to_string(n + 1) + " golden degrees";
    });
  if (fx.picard) {
    check("picard", [&] {
      validate_picard(*fx.picard);
      for (const auto& v : fx.picard->known_fixed_classes)
        if (!is_fixed_class(*fx.picard, v)) fail(ErrorKind::CrossCheckMismatch, "a known class is not fixed");
      return std::to_string(fx.picard->size()) + "x" + std::to_string(fx.picard->size());
    });
    if (fx.picard->surface)
      check("orthogonality", [&] {
        const bool orth = orthogonality_check(*fx.picard);
        if (orth != fx.picard->automorphism)
          fail(ErrorKind::CrossCheckMismatch, std::string("orthogonality=") + (orth ? "true" : "false") +
                                                  " but automorphism=" + (fx.picard->automorphism ? "true" : "false"));
        return std::string("orthogonality=") + (orth ? "true" : "false") + " (expected)";
      });
  }
  return out;
}

inline int cmd_verify(const RunConfig& cfg, std::ostream& os, std::ostream& err) {
  Fixture fx;
  try {
    if (cfg.format != "csv" && cfg.format != "json") fail(ErrorKind::Usage, "--format is csv or json");
    fx = load_config_fixture(cfg);
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
  const auto checks = verify_checks(fx);
  emit(cfg, os, [&](std::ostream& o) {
    if (cfg.format == "json") {
      io::Json arr = io::Json::array();
      for (const auto& c : checks) arr.push_back(io::Json{{"check", c.name}, {"pass", c.pass}, {"detail", c.detail}});
      o << io::Json{{"fixture", fx.id}, {"checks", arr}}.dump(2) << '\n';
    } else {
      for (const auto& c : checks) o << (c.pass ? "PASS " : "FAIL ") << c.name << ": " << c.detail << '\n';
    }
  });
  for (const auto& c : checks)
    if (!c.pass) {
      err << "verification failed: " << c.name << ": " << c.detail << '\n';
      return 2;
    }
  return 0;
}

inline std::string join(const IntVector& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + v[i].get_str();
  return s;
}

inline int cmd_picard(const RunConfig& cfg, std::ostream& os, std::ostream& err) {
  Fixture fx;
  try {
    if (cfg.action != "power" && cfg.action != "fixed-classes" && cfg.action != "orthogonality")
      fail(ErrorKind::Usage, "picard action is power, fixed-classes or orthogonality");
    if (cfg.action == "power" && cfg.n_max < 1) fail(ErrorKind::Usage, "--n must be at least 1");
    fx = load_config_fixture(cfg);
    if (!fx.picard) fail(ErrorKind::Usage, fx.id + " has no Picard matrix");
    validate_picard(*fx.picard);
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
  const auto& m = *fx.picard;
  int code = 0;
  try {
    emit(cfg, os, [&](std::ostream& o) {
      if (cfg.action == "power") {
        auto r = run_method(fx, Method::Picard, cfg.n_max, cfg.seed);
        if (cfg.format == "json") {
          o << io::Json{{"fixture", fx.id},
                        {"basis", m.basis},
                        {"power", io::to_json(matrix_power(m.matrix, static_cast<unsigned long>(cfg.n_max)))},
                        {"degrees", r.degrees}}
                   .dump(2)
            << '\n';
        } else {
          write_csv(o, r, false);
        }
        if (has_golden(fx))
          if (auto g = golden_mismatch(fx, r)) {
            err << "golden table mismatch at n=" << g->n << ": " << g->what << '\n';
            code = 2;
          }
      } else if (cfg.action == "fixed-classes") {
        const auto gens = fixed_classes(m);
        std::vector<bool> known_ok;
        for (const auto& v : m.known_fixed_classes) known_ok.push_back(is_fixed_class(m, v));
        if (cfg.format == "json") {
          io::Json g = io::Json::array();
          for (const auto& v : gens) g.push_back(io::to_json(v));
          io::Json k = io::Json::array();
          for (std::size_t i = 0; i < known_ok.size(); ++i)
            k.push_back(io::Json{{"class", io::to_json(m.known_fixed_classes[i])}, {"fixed", bool(known_ok[i])}});
          o << io::Json{{"fixture", fx.id}, {"basis", m.basis}, {"generators", g}, {"known", k}}.dump(2) << '\n';
        } else {
          o << "# basis";
          for (const auto& b : m.basis) o << ',' << b;
          o << '\n';
          for (const auto& v : gens) o << join(v) << '\n';
          for (std::size_t i = 0; i < known_ok.size(); ++i)
            o << "# known " << join(m.known_fixed_classes[i]) << (known_ok[i] ? " fixed" : " NOT fixed") << '\n';
        }
        for (bool ok : known_ok)
          if (!ok) {
            err << "a known fixed class is not fixed\n";
            code = 2;
          }
      } else {
        const bool orth = orthogonality_check(m);
        if (cfg.format == "json")
          o << io::Json{{"fixture", fx.id}, {"orthogonality", orth}, {"automorphism", m.automorphism}}.dump(2) << '\n';
        else
          o << "orthogonality=" << (orth ? "true" : "false")
            << " automorphism=" << (m.automorphism ? "true" : "false") << '\n';
        if (orth != m.automorphism) {
          err << "orthogonality does not match the automorphism flag\n";
          code = 2;
        }
      }
    });
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  }
  return code;
}

inline int cmd_dyndeg(const RunConfig& cfg, std::ostream& os, std::ostream& err) {
  Fixture fx;
  try {
    check_config(cfg);
    fx = load_config_fixture(cfg);
    if (!fx.recurrence && !fx.picard) fail(ErrorKind::Usage, fx.id + " has neither a recurrence nor a Picard matrix");
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
  try {
    const IntMatrix& m = fx.recurrence ? fx.recurrence->matrix : fx.picard->matrix;
    std::vector<DegreeSequenceReport> reports;
    for (auto method : cfg.methods) reports.push_back(run_method(fx, method, cfg.n_max, cfg.seed));
    const auto& seq = reports.front().degrees;
    const auto dd = dynamical_degree(m, seq);
    const bool fekete = fekete_check(seq);
    const auto disagreement = first_disagreement(reports);
    emit(cfg, os, [&](std::ostream& o) {
      std::ostringstream lambda;
      lambda << std::setprecision(12) << std::fixed << dd.numeric;
      if (cfg.format == "json") {
        io::Json j{{"fixture", fx.id},
                   {"source", fx.recurrence ? "recurrence" : "picard"},
                   {"lambda", dd.numeric},
                   {"exact", dd.exact},
                   {"lower", dd.lower.get_str()},
                   {"upper", dd.upper.get_str()},
                   {"sequence", seq},
                   {"fekete", fekete}};
        if (dd.empirical) j["empirical"] = *dd.empirical;
        o << j.dump(2) << '\n';
      } else {
        o << "lambda=" << lambda.str() << '\n' << "exact=" << dd.exact << '\n';
        o << "bracket=(" << dd.lower.get_str() << "," << dd.upper.get_str() << "]\n";
        o << "sequence=";
        for (std::size_t i = 0; i < seq.size(); ++i) o << (i ? "," : "") << seq[i];
        o << '\n';
        if (dd.empirical) o << "empirical=" << *dd.empirical << '\n';
        o << "fekete=" << (fekete ? "pass" : "fail") << '\n';
      }
    });
    if (disagreement) {
      err << "methods disagree at n=" << disagreement->n << ": " << disagreement->what << '\n';
      return 2;
    }
    if (!fekete) {
      err << "degree sequence fails the submultiplicativity check\n";
      return 2;
    }
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return e.kind() == ErrorKind::Usage ? 1 : 2;
  }
  return 0;
}

inline int cmd_list_fixtures(std::ostream& os) {
  for (const auto& id : list_fixture_ids()) os << id << '\n';
  return 0;
}

/// Writes <id>.json plus separate map, charts and Picard files into a directory.
inline int cmd_export_fixture(const RunConfig& cfg, std::ostream& os, std::ostream& err) {
  try {
    if (!cfg.fixture) fail(ErrorKind::Usage, "export-fixture needs --fixture");
    if (!cfg.out) fail(ErrorKind::Usage, "export-fixture needs --out <directory>");
    const auto fx = load_config_fixture(cfg);
    std::filesystem::create_directories(*cfg.out);
    const auto base = *cfg.out / fx.id;
    io::write_json_file(base.string() + ".json", io::to_json(fx));
    io::write_json_file(base.string() + ".map.json", io::to_json(fx.map));
    io::write_json_file(base.string() + ".charts.json", io::to_json(fx.charts));
    if (fx.picard) io::write_json_file(base.string() + ".picard.json", io::to_json(*fx.picard));
    os << base.string() << ".json\n";
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::filesystem::filesystem_error& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}

// ---- argument parsing ---------------------------------------------------------

inline int run(int argc, const char* const* argv, std::ostream& os, std::ostream& err) {
  CLI::App app{"Degrees of iterates of birational maps"};
  app.require_subcommand(1);

  RunConfig cfg;
  std::string fixture, map_path, charts_path, picard_path, out;
  std::string seq_methods = "indices", dyn_methods = "recurrence";
  std::vector<std::string> params;

  auto add_common = [&](CLI::App* sub, std::string* methods, int default_n) {
    sub->add_option("--fixture", fixture, "builtin or registry fixture id");
    sub->add_option("--map", map_path, "map descriptor JSON");
    sub->add_option("--charts", charts_path, "chart JSON (one chart or an array)");
    sub->add_option("--picard", picard_path, "Picard fixture JSON");
    sub->add_option("--n", cfg.n_max, "largest iterate")->default_val(default_n);
    if (methods) sub->add_option("--methods", *methods, "oracle,indices,recurrence,picard,closed-form");
    sub->add_option("--seed", cfg.seed, "seed for the generic line P0")->default_val(1);
    sub->add_option("--format", cfg.format, "csv or json")->default_val("csv");
    sub->add_option("--out", out, "output path");
    sub->add_option("--param", params, "name=value, e.g. a=3/2");
  };

  auto* degree_seq = app.add_subcommand("degree-seq", "degree sequence by one or more methods");
  add_common(degree_seq, &seq_methods, 0);
  auto* indices = app.add_subcommand("indices", "degrees and local indices of P_n");
  add_common(indices, nullptr, 0);
  auto* verify = app.add_subcommand("verify", "structural checks of a map and its charts");
  add_common(verify, nullptr, 1);
  auto* picard = app.add_subcommand("picard", "Picard matrix operations");
  picard->add_option("action", cfg.action, "power, fixed-classes or orthogonality")->required();
  add_common(picard, nullptr, 1);
  auto* dyndeg = app.add_subcommand("dyndeg", "dynamical degree");
  add_common(dyndeg, &dyn_methods, 12);
  auto* list = app.add_subcommand("list-fixtures", "list fixture ids");
  auto* exporter = app.add_subcommand("export-fixture", "write a fixture as JSON files");
  add_common(exporter, nullptr, 1);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    std::ostringstream o, e2;
    const int code = app.exit(e, o, e2);
    os << o.str();
    err << e2.str();
    return code == 0 ? 0 : 1;
  }
  try {
    if (!fixture.empty()) cfg.fixture = fixture;
    if (!map_path.empty()) cfg.map_path = map_path;
    if (!charts_path.empty()) cfg.charts_path = charts_path;
    if (!picard_path.empty()) cfg.picard_path = picard_path;
    if (!out.empty()) cfg.out = out;
    cfg.methods = parse_methods(dyndeg->parsed() ? dyn_methods : seq_methods);
    for (const auto& p : params) {
      const auto eq = p.find('=');
      if (eq == std::string::npos || eq == 0) fail(ErrorKind::Usage, "--param expects name=value");
      cfg.params[p.substr(0, eq)] = p.substr(eq + 1);
    }
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }

  if (degree_seq->parsed()) return cmd_degree_seq(cfg, os, err);
  if (indices->parsed()) return cmd_indices(cfg, os, err);
  if (verify->parsed()) return cmd_verify(cfg, os, err);
  if (picard->parsed()) return cmd_picard(cfg, os, err);
  if (dyndeg->parsed()) return cmd_dyndeg(cfg, os, err);
  if (list->parsed()) return cmd_list_fixtures(os);
  if (exporter->parsed()) return cmd_export_fixture(cfg, os, err);
  return 1;
}

}  // namespace birdeg::cli
