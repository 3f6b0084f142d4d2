#pragma once

// Birational maps of projective space given by homogeneous components, with
// declared critical factors and (optionally) an inverse.

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "birdeg/blowup.hpp"
#include "birdeg/errors.hpp"
#include "birdeg/poly.hpp"
#include "birdeg/projective.hpp"

namespace birdeg {

struct CriticalFactor {
  std::string id;
  MultiPoly K;
  ProjectivePoint target;
  std::string chart_ref;

  friend bool operator==(const CriticalFactor&, const CriticalFactor&) = default;
};

struct BirationalMapDescriptor {
  std::string name;
  std::size_t dimension = 0;
  std::vector<std::string> variables;
  std::vector<MultiPoly> components;
  std::vector<CriticalFactor> critical_factors;
  std::optional<std::vector<MultiPoly>> inverse;
  // factor id -> N+1 homogeneous coordinates in N-1 affine parameters
  std::map<std::string, std::vector<MultiPoly>> parametrizations;

  [[nodiscard]] long degree() const { return components.front().total_degree(); }
  [[nodiscard]] std::size_t nvars() const { return dimension + 1; }

  friend bool operator==(const BirationalMapDescriptor&, const BirationalMapDescriptor&) = default;
};

inline const CriticalFactor& find_factor(const BirationalMapDescriptor& f, const std::string& id) {
  for (const auto& k : f.critical_factors)
    if (k.id == id) return k;
  fail(ErrorKind::InvalidDescriptor, "unknown critical factor '" + id + "'");
}

inline MultiPoly pull_back(const BirationalMapDescriptor& f, const MultiPoly& p) {
  if (p.nvars() != f.nvars())
    fail(ErrorKind::ArityMismatch, "pull_back expects a polynomial in " + std::to_string(f.nvars()) +
                                       " variables");
  return substitute(p, f.components);
}

struct ProperPullBack {
  MultiPoly ptilde;
  std::map<std::string, int> nu;
};

/// Strips every critical factor from f*P. The exponent of each factor is
/// found by trial division and independently by the local index on the
/// factor's chart; the two must agree.
inline ProperPullBack proper_pull_back(const BirationalMapDescriptor& f,
                                       const std::vector<Chart>& charts, const MultiPoly& p) {
  if (p.is_zero()) fail(ErrorKind::ZeroPolynomial, "proper pull-back of the zero polynomial");
  ProperPullBack out{pull_back(f, p), {}};
  for (const auto& k : f.critical_factors) {
    auto split = extract_power(out.ptilde, k.K);
    const int by_chart = local_index(find_chart(charts, k.chart_ref), p);
    if (split.exponent != by_chart)
      fail(ErrorKind::CrossCheckMismatch,
           "factor " + k.id + ": trial division gives " + std::to_string(split.exponent) +
               ", chart " + k.chart_ref + " gives " + std::to_string(by_chart));
    out.ptilde = std::move(split.cofactor);
    out.nu[k.id] = split.exponent;
  }
  return out;
}

inline bool indeterminacy_contains(const BirationalMapDescriptor& f, const ProjectivePoint& p) {
  for (const auto& c : f.components)
    if (evaluate(c, p.coords()) != 0) return false;
  return true;
}

inline ProjectivePoint apply_map(const BirationalMapDescriptor& f, const ProjectivePoint& p) {
  std::vector<Rational> image;
  for (const auto& c : f.components) image.push_back(evaluate(c, p.coords()));
  return ProjectivePoint(std::move(image));
}

struct Orbit {
  std::vector<ProjectivePoint> points;
  bool hit = false;
  int steps = 0;  // map applications performed
};

/// Forward orbit of p, stopping at the first point of I(f). The orbit lists
/// p itself and, on a hit, the indeterminacy point reached.
inline Orbit orbit_until_indeterminate(const BirationalMapDescriptor& f, const ProjectivePoint& p,
                                       int max_steps) {
  Orbit out;
  out.points.push_back(p);
  for (;;) {
    if (indeterminacy_contains(f, out.points.back())) {
      out.hit = true;
      return out;
    }
    if (out.steps == max_steps) return out;
    out.points.push_back(apply_map(f, out.points.back()));
    ++out.steps;
  }
}

struct FactorExponents {
  std::map<std::string, int> exponents;
  Rational scalar;
};

/// The Jacobian determinant must be a constant times a product of the
/// declared factors.
inline FactorExponents verify_critical_factors(const BirationalMapDescriptor& f) {
  MultiPoly rest = jacobian_det(f.components);
  if (rest.is_zero()) fail(ErrorKind::InvalidDescriptor, f.name + ": Jacobian vanishes identically");
  FactorExponents out;
  for (const auto& k : f.critical_factors) {
    auto split = extract_power(rest, k.K);
    out.exponents[k.id] = split.exponent;
    rest = std::move(split.cofactor);
  }
  if (!rest.is_constant())
    fail(ErrorKind::IncompleteFactorList,
         f.name + ": Jacobian has the undeclared factor " + to_string(rest, f.variables));
  out.scalar = rest.constant_value();
  return out;
}

/// f_- composed with f_+ must be K_+ times the identity; returns K_+.
inline MultiPoly verify_inverse(const BirationalMapDescriptor& f) {
  if (!f.inverse) fail(ErrorKind::NotInverse, f.name + ": no inverse declared");
  const auto& inv = *f.inverse;
  if (inv.size() != f.nvars()) fail(ErrorKind::NotInverse, f.name + ": inverse has wrong arity");
  std::vector<MultiPoly> composed;
  for (const auto& g : inv) composed.push_back(substitute(g, f.components));
  const auto x = variables(f.nvars());
  auto kplus = exact_divide(composed[0], x[0]);
  if (!kplus || kplus->is_zero()) fail(ErrorKind::NotInverse, f.name + ": composition is not K*x0");
  for (std::size_t i = 0; i < composed.size(); ++i)
    if (composed[i] != *kplus * x[i])
      fail(ErrorKind::NotInverse, f.name + ": composition is not a multiple of the identity");
  MultiPoly rest = *kplus;
  for (const auto& k : f.critical_factors) rest = extract_power(rest, k.K).cofactor;
  if (!rest.is_constant())
    fail(ErrorKind::UnexplainedFactor,
         f.name + ": K+ has the undeclared factor " + to_string(rest, f.variables));
  return *kplus;
}

namespace detail {

// Homogeneous parametrization of a hyperplane sum c_i x_i = 0 by N
// parameters, solving for the last variable with a nonzero coefficient.
inline std::vector<MultiPoly> parametrize_hyperplane(const MultiPoly& k) {
  const std::size_t n = k.nvars();
  std::vector<Rational> c(n);
  for (const auto& t : k.terms())
    for (std::size_t i = 0; i < n; ++i)
      if (t.mono[i] == 1) c[i] = t.coef;
  std::size_t pivot = n;
  for (std::size_t i = n; i-- > 0;)
    if (c[i] != 0) {
      pivot = i;
      break;
    }
  if (pivot == n) fail(ErrorKind::InvalidDescriptor, "degenerate linear factor");
  const auto s = variables(n - 1);
  std::vector<MultiPoly> out;
  MultiPoly solved(n - 1);
  std::size_t j = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (i == pivot) {
      out.emplace_back(n - 1);
      continue;
    }
    out.push_back(s[j]);
    solved -= s[j] * (c[i] / c[pivot]);
    ++j;
  }
  out[pivot] = solved;
  return out;
}

}  // namespace detail

/// Image point of the factor's zero set. Every 2x2 minor of the composed
/// image against one nonzero sample must vanish identically.
inline ProjectivePoint contraction_check(const BirationalMapDescriptor& f,
                                         const std::string& factor_id) {
  const auto& k = find_factor(f, factor_id);
  std::vector<MultiPoly> param;
  if (auto it = f.parametrizations.find(factor_id); it != f.parametrizations.end()) {
    param = it->second;
  } else if (k.K.total_degree() == 1) {
    param = detail::parametrize_hyperplane(k.K);
  } else {
    fail(ErrorKind::InvalidDescriptor, "factor " + factor_id + " needs a declared parametrization");
  }
  if (param.size() != f.nvars() || !substitute(k.K, param).is_zero())
    fail(ErrorKind::InvalidDescriptor, "parametrization of " + factor_id + " is not on {K=0}");

  std::vector<MultiPoly> image;
  for (const auto& c : f.components) image.push_back(substitute(c, param));

  const std::size_t np = param.front().nvars();
  std::mt19937_64 rng(0x5eedULL);
  std::uniform_int_distribution<int> dist(-50, 50);
  std::vector<Rational> sample;
  for (int attempt = 0; attempt < 64 && sample.empty(); ++attempt) {
    std::vector<Rational> s(np);
    for (auto& v : s) v = dist(rng);
    std::vector<Rational> vals;
    bool nonzero = false;
    for (const auto& c : image) {
      vals.push_back(evaluate(c, s));
      if (vals.back() != 0) nonzero = true;
    }
    if (nonzero) sample = std::move(vals);
  }
  if (sample.empty())
    fail(ErrorKind::NotContractedToPoint, "factor " + factor_id + " lies inside I(f)");
  for (std::size_t i = 0; i < image.size(); ++i)
    for (std::size_t j = i + 1; j < image.size(); ++j)
      if (!(image[i] * sample[j] - image[j] * sample[i]).is_zero())
        fail(ErrorKind::NotContractedToPoint,
             "factor " + factor_id + " is not contracted to a point");
  ProjectivePoint target(sample);
  if (target != k.target)
    fail(ErrorKind::TargetMismatch, "factor " + factor_id + " maps to " + to_string(target) +
                                        ", declared " + to_string(k.target));
  return target;
}

/// (num o f) * den - (den o f) * num == 0.
inline bool verify_rational_invariant(const BirationalMapDescriptor& f, const MultiPoly& num,
                                      const MultiPoly& den) {
  if (!num.is_homogeneous() || !den.is_homogeneous() || num.total_degree() != den.total_degree())
    fail(ErrorKind::NotHomogeneous, "invariant needs homogeneous parts of equal degree");
  return (pull_back(f, num) * den - pull_back(f, den) * num).is_zero();
}

namespace detail {

inline std::vector<Rational> random_vector(std::mt19937_64& rng, std::size_t n) {
  std::uniform_int_distribution<int> num(-97, 97);
  std::uniform_int_distribution<int> den(1, 7);
  std::vector<Rational> v(n);
  for (auto& x : v) {
    x = Rational(num(rng), den(rng));
    x.canonicalize();
  }
  return v;
}

// Components have a nonconstant common factor only if their restrictions
// to every line share a root; one line with a constant gcd rules it out.
inline bool coprime_on_some_line(const std::vector<MultiPoly>& comps, std::mt19937_64& rng,
                                 int lines) {
  const std::size_t n = comps.front().nvars();
  for (int l = 0; l < lines; ++l) {
    auto base = random_vector(rng, n);
    auto dir = random_vector(rng, n);
    std::vector<MultiPoly> restricted;
    for (const auto& c : comps) restricted.push_back(restrict_to_line(c, base, dir));
    if (coprime_mod_prime(restricted)) return true;
  }
  return false;
}

}  // namespace detail

/// Removes from the components the largest power of each critical factor
/// dividing all of them.
inline std::vector<MultiPoly> strip_common_factors(const BirationalMapDescriptor& f,
                                                   std::vector<MultiPoly> comps) {
  for (const auto& k : f.critical_factors) {
    for (;;) {
      std::vector<MultiPoly> next;
      for (const auto& c : comps) {
        auto q = exact_divide(c, k.K);
        if (!q) break;
        next.push_back(std::move(*q));
      }
      if (next.size() != comps.size()) break;
      comps = std::move(next);
    }
  }
  return comps;
}

struct MinimalIterate {
  std::vector<MultiPoly> components;
  long degree = 0;
};

/// Minimal lifts of f^1, ..., f^n, built one composition at a time. Calls
/// `visit(k, iterate)` for each k.
template <class Visitor>
void iterate_minimal_each(const BirationalMapDescriptor& f, int n, Visitor&& visit) {
  if (n < 1) fail(ErrorKind::Usage, "iterate_minimal needs n >= 1");
  std::mt19937_64 rng(0xb17dULL);
  MinimalIterate cur{f.components, f.degree()};
  visit(1, cur);
  for (int k = 2; k <= n; ++k) {
    std::vector<MultiPoly> next;
    for (const auto& c : cur.components) next.push_back(substitute(c, f.components));
    next = strip_common_factors(f, std::move(next));
    if (!detail::coprime_on_some_line(next, rng, 3))
      fail(ErrorKind::ResidualCommonFactor,
           f.name + ": iterate " + std::to_string(k) + " keeps a common factor");
    cur.components = std::move(next);
    cur.degree = cur.components.front().total_degree();
    visit(k, cur);
  }
}

inline MinimalIterate iterate_minimal(const BirationalMapDescriptor& f, int n) {
  MinimalIterate out;
  iterate_minimal_each(f, n, [&](int, const MinimalIterate& it) { out = it; });
  return out;
}

/// deg(f^0), ..., deg(f^n) from the minimal-lift oracle.
inline std::vector<long> oracle_degrees(const BirationalMapDescriptor& f, int n) {
  std::vector<long> out{1};
  if (n >= 1) iterate_minimal_each(f, n, [&](int, const MinimalIterate& it) { out.push_back(it.degree); });
  return out;
}

/// Arity, homogeneity and equal degrees of the components.
inline void validate_shape(const BirationalMapDescriptor& f) {
  if (f.dimension == 0) fail(ErrorKind::InvalidDescriptor, "dimension must be positive");
  if (f.components.size() != f.nvars())
    fail(ErrorKind::InvalidDescriptor, f.name + ": expected N+1 components");
  if (f.variables.size() != f.nvars())
    fail(ErrorKind::InvalidDescriptor, f.name + ": expected N+1 variable names");
  for (const auto& c : f.components) {
    if (c.nvars() != f.nvars()) fail(ErrorKind::ArityMismatch, f.name + ": component arity");
    if (c.is_zero() || !c.is_homogeneous())
      fail(ErrorKind::NotHomogeneous, f.name + ": components must be nonzero and homogeneous");
    if (c.total_degree() != f.components.front().total_degree())
      fail(ErrorKind::NotHomogeneous, f.name + ": components have different degrees");
  }
}

/// Structural checks performed before a descriptor is used.
inline void validate_descriptor(const BirationalMapDescriptor& f, const std::vector<Chart>& charts) {
  validate_shape(f);
  for (const auto& chart : charts) validate_chart(chart);
  for (const auto& k : f.critical_factors) {
    if (k.K.nvars() != f.nvars() || k.K.is_constant() || !k.K.is_homogeneous())
      fail(ErrorKind::InvalidDescriptor, "factor " + k.id + " must be homogeneous and nonconstant");
    const auto& chart = find_chart(charts, k.chart_ref);
    if (chart.center != k.target)
      fail(ErrorKind::TargetMismatch, "chart " + chart.id + " is not centred at the target of " + k.id);
  }
  verify_critical_factors(f);
  for (const auto& k : f.critical_factors) contraction_check(f, k.id);
  if (f.inverse) verify_inverse(f);
}

}  // namespace birdeg
