#pragma once

// Exact integer and rational matrices.

#include <algorithm>
#include <cstddef>
#include <vector>

#include "birdeg/errors.hpp"
#include "birdeg/rational.hpp"

namespace birdeg {

using IntVector = std::vector<Integer>;
using IntMatrix = std::vector<IntVector>;

inline IntMatrix to_int_matrix(const std::vector<std::vector<long>>& rows) {
  IntMatrix m;
  for (const auto& r : rows) {
    IntVector v;
    for (long x : r) v.emplace_back(x);
    m.push_back(std::move(v));
  }
  return m;
}

inline IntVector to_int_vector(const std::vector<long>& xs) {
  IntVector v;
  for (long x : xs) v.emplace_back(x);
  return v;
}

inline void check_square(const IntMatrix& m) {
  for (const auto& row : m)
    if (row.size() != m.size()) fail(ErrorKind::DimensionMismatch, "matrix is not square");
}

inline IntMatrix identity_matrix(std::size_t n) {
  IntMatrix m(n, IntVector(n, 0));
  for (std::size_t i = 0; i < n; ++i) m[i][i] = 1;
  return m;
}

inline IntMatrix transpose(const IntMatrix& m) {
  if (m.empty()) return m;
  IntMatrix t(m[0].size(), IntVector(m.size()));
  for (std::size_t i = 0; i < m.size(); ++i)
    for (std::size_t j = 0; j < m[i].size(); ++j) t[j][i] = m[i][j];
  return t;
}

inline IntMatrix multiply(const IntMatrix& a, const IntMatrix& b) {
  if (a.empty() || a[0].size() != b.size()) fail(ErrorKind::DimensionMismatch, "matrix product shapes");
  IntMatrix c(a.size(), IntVector(b[0].size(), 0));
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t k = 0; k < b.size(); ++k) {
      if (a[i][k] == 0) continue;
      for (std::size_t j = 0; j < b[0].size(); ++j) c[i][j] += a[i][k] * b[k][j];
    }
  return c;
}

inline IntVector multiply(const IntMatrix& a, const IntVector& v) {
  if (a.empty() || a[0].size() != v.size()) fail(ErrorKind::DimensionMismatch, "matrix-vector shapes");
  IntVector out(a.size(), 0);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < v.size(); ++j) out[i] += a[i][j] * v[j];
  return out;
}

inline IntMatrix matrix_power(const IntMatrix& m, unsigned long n) {
  check_square(m);
  IntMatrix result = identity_matrix(m.size());
  IntMatrix base = m;
  while (n > 0) {
    if (n & 1ul) result = multiply(result, base);
    n >>= 1ul;
    if (n > 0) base = multiply(base, base);
  }
  return result;
}

/// Characteristic polynomial det(lambda I - M), coefficients from the
/// constant term up (monic). Faddeev-LeVerrier over the rationals.
inline IntVector char_poly(const IntMatrix& m) {
  check_square(m);
  const std::size_t n = m.size();
  using RMatrix = std::vector<std::vector<Rational>>;
  RMatrix a(n, std::vector<Rational>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) a[i][j] = Rational(m[i][j]);
  std::vector<Rational> c(n + 1);
  c[n] = 1;
  RMatrix mk(n, std::vector<Rational>(n, 0));  // M_0 = 0
  for (std::size_t k = 1; k <= n; ++k) {
    // M_k = A M_{k-1} + c_{n-k+1} I
    RMatrix next(n, std::vector<Rational>(n, 0));
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t l = 0; l < n; ++l) {
        for (std::size_t j = 0; j < n; ++j)
          if (mk[l][j] != 0 && a[i][l] != 0) next[i][j] += a[i][l] * mk[l][j];
      }
    for (std::size_t i = 0; i < n; ++i) next[i][i] += c[n - k + 1];
    mk = std::move(next);
    Rational trace = 0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t l = 0; l < n; ++l) trace += a[i][l] * mk[l][i];
    c[n - k] = -trace / static_cast<long>(k);
  }
  IntVector out;
  for (const auto& x : c) {
    if (!is_integer(x)) fail(ErrorKind::DimensionMismatch, "non-integral characteristic coefficient");
    out.push_back(x.get_num());
  }
  return out;
}

/// Basis of the rational kernel of M, each vector scaled to a primitive
/// integer vector.
inline std::vector<IntVector> integer_kernel(const IntMatrix& m) {
  if (m.empty()) return {};
  const std::size_t rows = m.size();
  const std::size_t cols = m[0].size();
  std::vector<std::vector<Rational>> a(rows, std::vector<Rational>(cols));
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j) a[i][j] = Rational(m[i][j]);
  std::vector<std::size_t> pivots;
  std::size_t r = 0;
  for (std::size_t col = 0; col < cols && r < rows; ++col) {
    std::size_t p = r;
    while (p < rows && a[p][col] == 0) ++p;
    if (p == rows) continue;
    std::swap(a[p], a[r]);
    const Rational inv = 1 / a[r][col];
    for (auto& x : a[r]) x *= inv;
    for (std::size_t i = 0; i < rows; ++i) {
      if (i == r || a[i][col] == 0) continue;
      const Rational factor = a[i][col];
      for (std::size_t j = 0; j < cols; ++j) a[i][j] -= factor * a[r][j];
    }
    pivots.push_back(col);
    ++r;
  }
  std::vector<IntVector> basis;
  for (std::size_t free = 0; free < cols; ++free) {
    if (std::find(pivots.begin(), pivots.end(), free) != pivots.end()) continue;
    std::vector<Rational> v(cols, 0);
    v[free] = 1;
    for (std::size_t i = 0; i < pivots.size(); ++i) v[pivots[i]] = -a[i][free];
    Integer lcm = 1;
    for (const auto& x : v) mpz_lcm(lcm.get_mpz_t(), lcm.get_mpz_t(), x.get_den_mpz_t());
    IntVector iv;
    Integer g = 0;
    for (const auto& x : v) {
      Integer z = x.get_num() * (lcm / x.get_den());
      mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), z.get_mpz_t());
      iv.push_back(z);
    }
    for (auto& z : iv) z /= g;
    basis.push_back(std::move(iv));
  }
  return basis;
}

/// Row Hermite normal form of an integer matrix (zero rows dropped).
inline IntMatrix hermite_normal_form(IntMatrix a) {
  if (a.empty()) return a;
  const std::size_t cols = a[0].size();
  std::size_t r = 0;
  for (std::size_t col = 0; col < cols && r < a.size(); ++col) {
    // Euclid on the column below r until one nonzero entry remains
    for (;;) {
      std::size_t best = a.size();
      for (std::size_t i = r; i < a.size(); ++i)
        if (a[i][col] != 0 && (best == a.size() || abs(a[i][col]) < abs(a[best][col]))) best = i;
      if (best == a.size()) break;
      std::swap(a[r], a[best]);
      bool done = true;
      for (std::size_t i = r + 1; i < a.size(); ++i) {
        if (a[i][col] == 0) continue;
        Integer q;
        mpz_fdiv_q(q.get_mpz_t(), a[i][col].get_mpz_t(), a[r][col].get_mpz_t());
        for (std::size_t j = 0; j < cols; ++j) a[i][j] -= q * a[r][j];
        if (a[i][col] != 0) done = false;
      }
      if (done) break;
    }
    if (r >= a.size() || a[r][col] == 0) continue;
    if (a[r][col] < 0)
      for (auto& x : a[r]) x = -x;
    for (std::size_t i = 0; i < r; ++i) {
      Integer q;
      mpz_fdiv_q(q.get_mpz_t(), a[i][col].get_mpz_t(), a[r][col].get_mpz_t());
      for (std::size_t j = 0; j < cols; ++j) a[i][j] -= q * a[r][j];
    }
    ++r;
  }
  a.resize(r);
  return a;
}

}  // namespace birdeg
