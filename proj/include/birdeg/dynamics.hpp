#pragma once

// Iterated proper pull-backs of a generic line, recurrence systems and
// growth rates.

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "birdeg/blowup.hpp"
#include "birdeg/errors.hpp"
#include "birdeg/linalg.hpp"
#include "birdeg/poly.hpp"
#include "birdeg/ratmap.hpp"

namespace birdeg {

struct DegreeIndexState {
  int n = 0;
  long d = 0;
  std::vector<std::pair<std::string, int>> nu;  // tracked chart id -> index, in tracking order
  MultiPoly P;

  [[nodiscard]] int nu_at(const std::string& chart_id) const {
    for (const auto& [id, v] : nu)
      if (id == chart_id) return v;
    fail(ErrorKind::InvalidDescriptor, "chart '" + chart_id + "' is not tracked");
  }
};

/// P_0, P_1, ..., P_nMax with f^* P_n = prod K_i^{nu_i(n)} P_{n+1}. The
/// exponents come from the factor charts; the division must be exact and
/// leave no further factor K_i.
inline std::vector<DegreeIndexState> iterate_indices(const BirationalMapDescriptor& f,
                                                     const std::vector<Chart>& charts,
                                                     const std::vector<std::string>& tracked,
                                                     const MultiPoly& p0, int n_max) {
  if (n_max < 0) fail(ErrorKind::Usage, "nMax must be non-negative");
  if (!p0.is_homogeneous() || p0.is_zero())
    fail(ErrorKind::NotHomogeneous, "P0 must be nonzero and homogeneous");
  for (const auto& k : f.critical_factors)
    if (std::find(tracked.begin(), tracked.end(), k.chart_ref) == tracked.end())
      fail(ErrorKind::InvalidDescriptor, "chart " + k.chart_ref + " of factor " + k.id + " is not tracked");

  std::vector<const Chart*> tracked_charts;
  for (const auto& id : tracked) tracked_charts.push_back(&find_chart(charts, id));

  const long dplus = f.degree();
  std::vector<DegreeIndexState> states;
  MultiPoly p = p0;
  for (int n = 0;; ++n) {
    DegreeIndexState st;
    st.n = n;
    st.d = p.total_degree();
    for (const auto* c : tracked_charts) st.nu.emplace_back(c->id, local_index(*c, p));
    if (n == n_max) {
      st.P = std::move(p);
      states.push_back(std::move(st));
      break;
    }
    MultiPoly next = pull_back(f, p);
    long expected = dplus * st.d;
    for (const auto& k : f.critical_factors) {
      const int nu = st.nu_at(k.chart_ref);
      auto split = extract_power(next, k.K, nu + 1);
      if (split.exponent < nu)
        fail(ErrorKind::CrossCheckMismatch, "n=" + std::to_string(n) + ": " + k.id + "^" +
                                                std::to_string(nu) + " does not divide f*P_n");
      if (split.exponent > nu)
        fail(ErrorKind::CrossCheckMismatch,
             "n=" + std::to_string(n) + ": f*P_n has more than " + std::to_string(nu) +
                 " factors " + k.id);
      next = std::move(split.cofactor);
      expected -= static_cast<long>(nu) * k.K.total_degree();
    }
    if (next.total_degree() != expected)
      fail(ErrorKind::CrossCheckMismatch, "degree identity fails at n=" + std::to_string(n));
    st.P = std::move(p);
    states.push_back(std::move(st));
    p = std::move(next);
  }
  return states;
}

/// Points a generic line must avoid: the factor targets with their forward
/// orbits up to I(f), and the centers of the tracked charts.
inline std::vector<ProjectivePoint> exclusion_points(const BirationalMapDescriptor& f,
                                                     const std::vector<Chart>& charts,
                                                     const std::vector<std::string>& tracked,
                                                     int orbit_steps = 8) {
  std::vector<ProjectivePoint> out;
  auto add = [&](const ProjectivePoint& p) {
    if (std::find(out.begin(), out.end(), p) == out.end()) out.push_back(p);
  };
  for (const auto& k : f.critical_factors)
    for (const auto& p : orbit_until_indeterminate(f, k.target, orbit_steps).points) add(p);
  for (const auto& id : tracked) add(find_chart(charts, id).center);
  return out;
}

inline MultiPoly draw_generic_line(std::size_t nvars, const std::vector<ProjectivePoint>& avoid,
                                   std::mt19937_64& rng) {
  std::uniform_int_distribution<int> dist(-9, 9);
  for (int attempt = 0; attempt < 10000; ++attempt) {
    std::vector<Term> terms;
    for (std::size_t i = 0; i < nvars; ++i) {
      Monomial m(nvars);
      m.set(i, 1);
      terms.push_back({std::move(m), Rational(dist(rng))});
    }
    MultiPoly p = MultiPoly::from_terms(nvars, std::move(terms));
    if (p.is_zero()) continue;
    bool ok = true;
    for (const auto& q : avoid)
      if (evaluate(p, q.coords()) == 0) ok = false;
    if (ok) return p;
  }
  fail(ErrorKind::NonGenericInput, "could not draw a line avoiding the exclusion set");
}

struct IndexRun {
  MultiPoly p0;
  std::vector<DegreeIndexState> states;
  int redraws = 0;
};

/// iterate_indices from a seeded random line, redrawing up to five times when
/// the line turns out to be special for some chart.
inline IndexRun iterate_indices_generic(const BirationalMapDescriptor& f,
                                        const std::vector<Chart>& charts,
                                        const std::vector<std::string>& tracked, int n_max,
                                        std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  const auto avoid = exclusion_points(f, charts, tracked);
  std::string last;
  for (int redraws = 0; redraws <= 5; ++redraws) {
    MultiPoly p0 = draw_generic_line(f.nvars(), avoid, rng);
    try {
      auto states = iterate_indices(f, charts, tracked, p0, n_max);
      return {std::move(p0), std::move(states), redraws};
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::ZeroComposition) throw;
      last = e.what();
    }
  }
  fail(ErrorKind::NonGenericInput, "no generic P0 after 5 redraws; last failure: " + last);
}

inline std::vector<long> degrees_of(const std::vector<DegreeIndexState>& states) {
  std::vector<long> out;
  for (const auto& s : states) out.push_back(s.d);
  return out;
}

struct RecurrenceSystem {
  std::vector<std::string> labels;  // "d" first, then chart ids
  IntMatrix matrix;
  IntVector initial;

  friend bool operator==(const RecurrenceSystem&, const RecurrenceSystem&) = default;
};

inline void validate_recurrence(const RecurrenceSystem& sys) {
  if (sys.labels.empty() || sys.labels.front() != "d")
    fail(ErrorKind::InvalidDescriptor, "recurrence labels must start with d");
  if (sys.matrix.size() != sys.labels.size() || sys.initial.size() != sys.labels.size())
    fail(ErrorKind::DimensionMismatch, "recurrence dimensions disagree");
  check_square(sys.matrix);
}

inline IntVector recurrence_step(const RecurrenceSystem& sys, const IntVector& state) {
  if (state.size() != sys.matrix.size()) fail(ErrorKind::DimensionMismatch, "state length");
  return multiply(sys.matrix, state);
}

inline IntVector recurrence_power(const RecurrenceSystem& sys, unsigned long n) {
  return multiply(matrix_power(sys.matrix, n), sys.initial);
}

/// The first component of M^n x_0 for n = 0..nMax.
inline std::vector<long> recurrence_degrees(const RecurrenceSystem& sys, int n_max) {
  std::vector<long> out;
  IntVector state = sys.initial;
  for (int n = 0; n <= n_max; ++n) {
    out.push_back(state[0].get_si());
    state = recurrence_step(sys, state);
  }
  return out;
}

/// The state vector in the recurrence's label order.
inline IntVector state_vector(const RecurrenceSystem& sys, const DegreeIndexState& st) {
  IntVector v;
  for (const auto& label : sys.labels) v.emplace_back(label == "d" ? st.d : st.nu_at(label));
  return v;
}

/// sum_j c_j * values[i-j] == 0 for every i >= coeffs.size()-1.
inline bool scalar_recurrence_check(const std::vector<long>& coeffs, const std::vector<long>& values) {
  if (coeffs.empty() || values.size() <= coeffs.size()) return false;
  for (std::size_t i = coeffs.size() - 1; i < values.size(); ++i) {
    Integer s = 0;
    for (std::size_t j = 0; j < coeffs.size(); ++j) s += Integer(coeffs[j]) * values[i - j];
    if (s != 0) return false;
  }
  return true;
}

/// d(n+m) <= d(n) d(m) for n, m >= 1.
inline bool fekete_check(const std::vector<long>& values) {
  for (std::size_t n = 1; n < values.size(); ++n)
    for (std::size_t m = 1; n + m < values.size(); ++m)
      if (Integer(values[n + m]) > Integer(values[n]) * values[m]) return false;
  return true;
}

/// First n with d(n+1) < dplus * d(n), if any.
inline std::optional<int> first_degree_drop(const std::vector<long>& values, long dplus) {
  for (std::size_t n = 0; n + 1 < values.size(); ++n)
    if (values[n + 1] < dplus * values[n]) return static_cast<int>(n);
  return std::nullopt;
}

namespace detail {

using Dense = std::vector<Rational>;

inline Dense dense_derivative(const Dense& p) {
  Dense out;
  for (std::size_t i = 1; i < p.size(); ++i) out.push_back(p[i] * static_cast<long>(i));
  return out;
}

inline Rational dense_eval(const Dense& p, const Rational& x) {
  Rational acc = 0;
  for (std::size_t i = p.size(); i-- > 0;) acc = acc * x + p[i];
  return acc;
}

inline Dense dense_quotient(Dense a, const Dense& b) {
  trim(a);
  if (a.size() < b.size()) return {};
  Dense q(a.size() - b.size() + 1);
  while (a.size() >= b.size()) {
    const Rational f = a.back() / b.back();
    const std::size_t shift = a.size() - b.size();
    q[shift] = f;
    for (std::size_t i = 0; i < b.size(); ++i) a[shift + i] -= f * b[i];
    a.pop_back();
    trim(a);
  }
  return q;
}

inline std::vector<Dense> sturm_sequence(const Dense& p) {
  std::vector<Dense> seq{p, dense_derivative(p)};
  trim(seq[1]);
  while (!seq.back().empty() && seq.back().size() > 1) {
    Dense r = seq[seq.size() - 2];
    remainder_in_place(r, seq.back());
    if (r.empty()) break;
    for (auto& c : r) c = -c;
    seq.push_back(std::move(r));
  }
  return seq;
}

inline int sign_changes(const std::vector<Dense>& seq, const Rational& x) {
  int changes = 0;
  int last = 0;
  for (const auto& p : seq) {
    const int s = sgn(dense_eval(p, x));
    if (s == 0) continue;
    if (last != 0 && s != last) ++changes;
    last = s;
  }
  return changes;
}

}  // namespace detail

struct DynamicalDegree {
  double numeric = 0.0;
  std::string exact;                    // factor of the characteristic polynomial
  Rational lower, upper;                // bracket (lower, upper] around the root
  std::optional<double> empirical;      // d(n+1)/d(n) at the end of the sequence
};

inline std::string format_dense(const detail::Dense& p) {
  std::vector<std::string> names{"lambda"};
  return to_string(detail::from_dense(p), names);
}

/// Largest real root (>= 0) of the characteristic polynomial, given with
/// coefficients from the constant term up.
inline DynamicalDegree dynamical_degree_from_char_poly(const IntVector& cp,
                                                       const std::vector<long>& sequence = {}) {
  detail::Dense p;
  for (const auto& c : cp) p.emplace_back(c);
  detail::trim(p);
  if (p.size() < 2) fail(ErrorKind::DimensionMismatch, "characteristic polynomial is constant");
  detail::Dense sqf = detail::dense_quotient(p, detail::dense_gcd(p, detail::dense_derivative(p)));
  const Rational lc = sqf.back();
  for (auto& c : sqf) c /= lc;

  Rational bound = 0;
  for (std::size_t i = 0; i + 1 < sqf.size(); ++i) bound = std::max(bound, Rational(abs(sqf[i])));
  bound += 1;

  DynamicalDegree out;
  const auto seq = detail::sturm_sequence(sqf);
  Rational lo = 0, hi = bound;
  if (detail::sign_changes(seq, lo) - detail::sign_changes(seq, hi) == 0) {
    lo = hi = 0;  // only root on [0, inf) can be 0 itself, if any
  } else {
    const Rational width(1, 1000000000000L);
    while (hi - lo > width) {
      Rational mid = (lo + hi) / 2;
      if (detail::sign_changes(seq, mid) - detail::sign_changes(seq, hi) > 0) lo = mid; else hi = mid;
    }
  }
  out.lower = lo;
  out.upper = hi;
  out.numeric = Rational((lo + hi) / 2).get_d();

  const Integer r(static_cast<long>(std::lround(out.numeric)));
  if (detail::dense_eval(sqf, Rational(r)) == 0) {
    int mult = 0;
    detail::Dense rest = p;
    const detail::Dense lin{Rational(-r), Rational(1)};
    for (;;) {
      detail::Dense rr = rest;
      detail::remainder_in_place(rr, lin);
      if (!rr.empty()) break;
      rest = detail::dense_quotient(rest, lin);
      ++mult;
    }
    out.numeric = r.get_d();
    out.lower = out.upper = Rational(r);
    out.exact = "lambda - " + r.get_str();
    if (r < 0) out.exact = "lambda + " + Integer(-r).get_str();
    if (r == 0) out.exact = "lambda";
    out.exact += " (multiplicity " + std::to_string(mult) + ")";
  } else {
    out.exact = "root of " + format_dense(sqf) + " in (" + lo.get_str() + ", " + hi.get_str() + "]";
  }
  if (sequence.size() >= 2 && sequence[sequence.size() - 2] > 0)
    out.empirical = static_cast<double>(sequence.back()) /
                    static_cast<double>(sequence[sequence.size() - 2]);
  return out;
}

inline DynamicalDegree dynamical_degree(const IntMatrix& m, const std::vector<long>& sequence = {}) {
  return dynamical_degree_from_char_poly(char_poly(m), sequence);
}

enum class ClosedForm { None, PenroseSmith, DpiPlane, Linear, PowerOfTwo, Constant };

inline std::string_view to_string(ClosedForm c) {
  switch (c) {
    case ClosedForm::None: return "none";
    case ClosedForm::PenroseSmith: return "penrose-smith";
    case ClosedForm::DpiPlane: return "dpi-plane";
    case ClosedForm::Linear: return "linear";
    case ClosedForm::PowerOfTwo: return "power-of-two";
    case ClosedForm::Constant: return "constant";
  }
  return "none";
}

inline ClosedForm closed_form_from_string(std::string_view s) {
  for (auto c : {ClosedForm::None, ClosedForm::PenroseSmith, ClosedForm::DpiPlane, ClosedForm::Linear,
                 ClosedForm::PowerOfTwo, ClosedForm::Constant})
    if (to_string(c) == s) return c;
  fail(ErrorKind::ParseError, "unknown closed form '" + std::string(s) + "'");
}

/// Exact value of the closed-form degree formula at n.
inline Integer closed_form_value(ClosedForm form, long n) {
  const Rational nn(n);
  Rational v;
  switch (form) {
    case ClosedForm::PenroseSmith:
      v = Rational(3, 4) * nn * nn + Rational(9 + (n % 2 == 0 ? -1 : 1), 8);
      break;
    case ClosedForm::DpiPlane: {
      // cos(2 pi n / 3) is 1 or -1/2
      const Rational cosine = n % 3 == 0 ? Rational(1) : Rational(-1, 2);
      v = (6 * nn * nn - 2 * cosine + 11) / 9;
      break;
    }
    case ClosedForm::Linear: v = nn + 1; break;
    case ClosedForm::PowerOfTwo: {
      Integer z;
      mpz_ui_pow_ui(z.get_mpz_t(), 2, static_cast<unsigned long>(n));
      v = Rational(z);
      break;
    }
    case ClosedForm::Constant: v = 1; break;
    case ClosedForm::None: fail(ErrorKind::UnknownFixture, "no closed form registered");
  }
  v.canonicalize();
  if (!is_integer(v)) fail(ErrorKind::CrossCheckMismatch, "closed form is not an integer");
  return v.get_num();
}

inline bool closed_form_check(ClosedForm form, const std::vector<long>& values) {
  for (std::size_t n = 0; n < values.size(); ++n)
    if (closed_form_value(form, static_cast<long>(n)) != values[n]) return false;
  return true;
}

}  // namespace birdeg
