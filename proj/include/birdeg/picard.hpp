#pragma once

// Action of f_X^* on Pic(X) = ZH + ZE_1 + ... + ZE_n.

#include <algorithm>
#include <cstddef>
#include <set>
#include <string>
#include <vector>

#include "birdeg/errors.hpp"
#include "birdeg/linalg.hpp"

namespace birdeg {

using DivisorClass = IntVector;

/// Column j holds f_X^* of basis element j. Classes of curves are written
/// deg(P) H - sum mu_i(P) E_i.
struct PicardMatrix {
  std::vector<std::string> basis;
  IntMatrix matrix;
  bool surface = true;
  bool automorphism = false;
  std::vector<DivisorClass> known_fixed_classes;

  [[nodiscard]] std::size_t size() const { return basis.size(); }

  friend bool operator==(const PicardMatrix&, const PicardMatrix&) = default;
};

inline void validate_picard(const PicardMatrix& m) {
  if (m.basis.empty() || m.basis.front() != "H")
    fail(ErrorKind::InvalidDescriptor, "Picard basis must start with H");
  if (std::set<std::string>(m.basis.begin(), m.basis.end()).size() != m.basis.size())
    fail(ErrorKind::InvalidDescriptor, "Picard basis labels must be unique");
  if (m.matrix.size() != m.basis.size()) fail(ErrorKind::DimensionMismatch, "Picard matrix size");
  check_square(m.matrix);
  for (const auto& v : m.known_fixed_classes)
    if (v.size() != m.size()) fail(ErrorKind::DimensionMismatch, "fixed class length");
}

/// The (H,H) entry of (f_X^*)^n, which is deg(f^n) on an algebraically
/// stable model.
inline Integer power_HH_entry(const PicardMatrix& m, unsigned long n) {
  return matrix_power(m.matrix, n)[0][0];
}

inline DivisorClass apply_to_class(const PicardMatrix& m, const DivisorClass& v) {
  if (v.size() != m.size()) fail(ErrorKind::DimensionMismatch, "class does not match the basis");
  return multiply(m.matrix, v);
}

/// Primitive integer generators of ker(M - I), in Hermite normal form order.
inline std::vector<DivisorClass> fixed_classes(const PicardMatrix& m) {
  IntMatrix shifted = m.matrix;
  for (std::size_t i = 0; i < shifted.size(); ++i) shifted[i][i] -= 1;
  IntMatrix rows = hermite_normal_form(integer_kernel(shifted));
  for (auto& row : rows) {
    Integer g = 0;
    for (const auto& x : row) mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), x.get_mpz_t());
    if (g > 1)
      for (auto& x : row) x /= g;
  }
  return rows;
}

inline bool is_fixed_class(const PicardMatrix& m, const DivisorClass& v) {
  return apply_to_class(m, v) == v;
}

/// a . b for the form diag(1, -1, ..., -1).
inline Integer intersection_product(const PicardMatrix& m, const DivisorClass& a,
                                    const DivisorClass& b) {
  if (!m.surface) fail(ErrorKind::InvalidDescriptor, "intersection form needs a surface basis");
  if (a.size() != m.size() || b.size() != m.size())
    fail(ErrorKind::DimensionMismatch, "class does not match the basis");
  Integer out = a[0] * b[0];
  for (std::size_t i = 1; i < a.size(); ++i) out -= a[i] * b[i];
  return out;
}

/// M^T J M == J.
inline bool orthogonality_check(const PicardMatrix& m) {
  if (!m.surface) fail(ErrorKind::InvalidDescriptor, "orthogonality needs a surface basis");
  const std::size_t n = m.size();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      Integer s = 0;
      for (std::size_t k = 0; k < n; ++k) {
        Integer t = m.matrix[k][i] * m.matrix[k][j];
        if (k == 0) s += t; else s -= t;
      }
      const Integer expected = i != j ? 0 : (i == 0 ? 1 : -1);
      if (s != expected) return false;
    }
  return true;
}

/// Conjugation by J = diag(1, -1, ..., -1).
inline IntMatrix conjugate_by_form(const IntMatrix& m) {
  IntMatrix out = m;
  for (std::size_t i = 0; i < m.size(); ++i)
    for (std::size_t j = 0; j < m.size(); ++j)
      if ((i == 0) != (j == 0)) out[i][j] = -out[i][j];
  return out;
}

}  // namespace birdeg
