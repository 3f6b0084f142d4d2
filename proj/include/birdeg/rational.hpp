#pragma once

#include <gmpxx.h>

#include <string>
#include <string_view>

#include "birdeg/errors.hpp"

namespace birdeg {

using Integer = mpz_class;
using Rational = mpq_class;

/// Parses "p", "-p" or "p/q" in decimal. The result is canonical.
inline Rational parse_rational(std::string_view text) {
  std::string s(text);
  if (s.empty()) fail(ErrorKind::ParseError, "empty rational literal");
  Rational r;
  if (r.set_str(s, 10) != 0) fail(ErrorKind::ParseError, "bad rational literal '" + s + "'");
  if (r.get_den() == 0) fail(ErrorKind::ParseError, "zero denominator in '" + s + "'");
  r.canonicalize();
  return r;
}

/// gmpxx leaves Rational(p, q) unreduced; coefficients must not be.
inline Rational canonical(Rational r) {
  r.canonicalize();
  return r;
}

inline std::string to_string(const Rational& r) { return r.get_str(10); }
inline std::string to_string(const Integer& z) { return z.get_str(10); }

inline Rational pow(const Rational& base, unsigned long exponent) {
  Rational out;
  mpz_pow_ui(out.get_num_mpz_t(), base.get_num_mpz_t(), exponent);
  mpz_pow_ui(out.get_den_mpz_t(), base.get_den_mpz_t(), exponent);
  out.canonicalize();
  return out;
}

inline bool is_integer(const Rational& r) { return r.get_den() == 1; }

}  // namespace birdeg
