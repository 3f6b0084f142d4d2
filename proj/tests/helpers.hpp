#pragma once

#include <random>
#include <vector>

#include "birdeg/poly.hpp"

namespace birdeg::testing {

// Random homogeneous polynomial of the given degree with small integer
// coefficients; roughly `density` of the monomials are present.
inline MultiPoly random_form(std::mt19937_64& rng, std::size_t nvars, unsigned degree,
                             double density = 0.7) {
  std::uniform_int_distribution<int> coef(-5, 5);
  std::bernoulli_distribution keep(density);
  std::vector<Term> terms;
  std::vector<Monomial::Exponent> e(nvars, 0);
  auto rec = [&](auto&& self, std::size_t i, unsigned left) -> void {
    if (i + 1 == nvars) {
      e[i] = left;
      if (keep(rng)) terms.push_back({Monomial(std::span<const Monomial::Exponent>(e)), Rational(coef(rng))});
      return;
    }
    for (unsigned k = 0; k <= left; ++k) {
      e[i] = k;
      self(self, i + 1, left - k);
    }
  };
  rec(rec, 0, degree);
  auto p = MultiPoly::from_terms(nvars, std::move(terms));
  if (p.is_zero()) {
    Monomial m(nvars);
    m.set(0, degree);
    p = MultiPoly::monomial(m, Rational(1));
  }
  return p;
}

inline MultiPoly random_poly(std::mt19937_64& rng, std::size_t nvars, unsigned max_degree) {
  MultiPoly out(nvars);
  for (unsigned d = 0; d <= max_degree; ++d) out += random_form(rng, nvars, d, 0.4);
  return out;
}

}  // namespace birdeg::testing
