#pragma once

// Sparse multivariate polynomials with exact rational coefficients.
//
// Terms are kept strictly descending in graded-lexicographic order (total
// degree first, then lexicographic with variable 0 largest), with no zero
// coefficients. Two equal polynomials therefore have identical term vectors.

#include <algorithm>
#include <array>
#include <climits>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <optional>
#include <ostream>
#include <queue>
#include <span>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <boost/container/small_vector.hpp>

#include "birdeg/errors.hpp"
#include "birdeg/rational.hpp"

namespace birdeg {

class Monomial {
 public:
  using Exponent = std::uint32_t;

  Monomial() = default;
  explicit Monomial(std::size_t nvars) : exps_(nvars, 0) {}
  Monomial(std::initializer_list<Exponent> exps) : exps_(exps) { recount(); }
  explicit Monomial(std::span<const Exponent> exps) : exps_(exps.begin(), exps.end()) {
    recount();
  }

  [[nodiscard]] std::size_t size() const noexcept { return exps_.size(); }
  [[nodiscard]] Exponent operator[](std::size_t i) const noexcept { return exps_[i]; }
  [[nodiscard]] std::uint64_t degree() const noexcept { return degree_; }
  [[nodiscard]] std::span<const Exponent> exponents() const noexcept {
    return {exps_.data(), exps_.size()};
  }

  void set(std::size_t i, Exponent value) {
    degree_ = degree_ - exps_[i] + value;
    exps_[i] = value;
  }

  [[nodiscard]] bool divides(const Monomial& other) const noexcept {
    if (degree_ > other.degree_) return false;
    for (std::size_t i = 0; i < exps_.size(); ++i)
      if (exps_[i] > other.exps_[i]) return false;
    return true;
  }

  friend Monomial operator*(const Monomial& a, const Monomial& b) {
    Monomial out(a);
    for (std::size_t i = 0; i < out.exps_.size(); ++i) out.exps_[i] += b.exps_[i];
    out.degree_ += b.degree_;
    return out;
  }

  // Precondition: b divides a.
  friend Monomial operator/(const Monomial& a, const Monomial& b) {
    Monomial out(a);
    for (std::size_t i = 0; i < out.exps_.size(); ++i) out.exps_[i] -= b.exps_[i];
    out.degree_ -= b.degree_;
    return out;
  }

  friend bool operator==(const Monomial& a, const Monomial& b) noexcept {
    return a.degree_ == b.degree_ && a.exps_ == b.exps_;
  }

  // graded lexicographic
  friend std::strong_ordering operator<=>(const Monomial& a, const Monomial& b) noexcept {
    if (a.degree_ != b.degree_) return a.degree_ <=> b.degree_;
    for (std::size_t i = 0; i < a.exps_.size(); ++i)
      if (a.exps_[i] != b.exps_[i]) return a.exps_[i] <=> b.exps_[i];
    return std::strong_ordering::equal;
  }

 private:
  void recount() {
    degree_ = 0;
    for (auto e : exps_) degree_ += e;
  }

  boost::container::small_vector<Exponent, 4> exps_;
  std::uint64_t degree_ = 0;
};

struct Term {
  Monomial mono;
  Rational coef;

  friend bool operator==(const Term&, const Term&) = default;
};

class MultiPoly;
MultiPoly operator*(const MultiPoly& a, const MultiPoly& b);

class MultiPoly {
 public:
  explicit MultiPoly(std::size_t nvars = 0) : nvars_(nvars) {}

  static MultiPoly constant(std::size_t nvars, const Rational& c) {
    MultiPoly p(nvars);
    if (c != 0) p.terms_.push_back({Monomial(nvars), canonical(c)});
    return p;
  }

  static MultiPoly variable(std::size_t nvars, std::size_t index) {
    if (index >= nvars) fail(ErrorKind::ArityMismatch, "variable index out of range");
    Monomial m(nvars);
    m.set(index, 1);
    return monomial(std::move(m), Rational(1));
  }

  static MultiPoly monomial(Monomial m, const Rational& c) {
    MultiPoly p(m.size());
    if (c != 0) p.terms_.push_back({std::move(m), canonical(c)});
    return p;
  }

  /// Builds a polynomial from arbitrary terms: sorts, merges duplicates and
  /// drops zeros.
  static MultiPoly from_terms(std::size_t nvars, std::vector<Term> terms) {
    for (auto& t : terms) {
      if (t.mono.size() != nvars) fail(ErrorKind::ArityMismatch, "term arity differs from polynomial");
      t.coef.canonicalize();
    }
    std::sort(terms.begin(), terms.end(),
              [](const Term& a, const Term& b) { return a.mono > b.mono; });
    MultiPoly p(nvars);
    for (auto& t : terms) {
      if (!p.terms_.empty() && p.terms_.back().mono == t.mono) {
        p.terms_.back().coef += t.coef;
        if (p.terms_.back().coef == 0) p.terms_.pop_back();
      } else if (t.coef != 0) {
        p.terms_.push_back(std::move(t));
      }
    }
    return p;
  }

  /// Adopts terms that are already strictly descending with nonzero
  /// coefficients.
  static MultiPoly from_canonical_terms(std::size_t nvars, std::vector<Term> terms) {
    MultiPoly p(nvars);
    p.terms_ = std::move(terms);
    return p;
  }

  [[nodiscard]] std::size_t nvars() const noexcept { return nvars_; }
  [[nodiscard]] const std::vector<Term>& terms() const noexcept { return terms_; }
  [[nodiscard]] std::size_t size() const noexcept { return terms_.size(); }
  [[nodiscard]] bool is_zero() const noexcept { return terms_.empty(); }
  [[nodiscard]] bool is_constant() const noexcept {
    return terms_.empty() || (terms_.size() == 1 && terms_[0].mono.degree() == 0);
  }
  [[nodiscard]] const Term& leading() const {
    if (terms_.empty()) fail(ErrorKind::ZeroPolynomial, "leading term of zero polynomial");
    return terms_.front();
  }
  [[nodiscard]] Rational constant_value() const {
    if (terms_.empty()) return 0;
    if (!is_constant()) fail(ErrorKind::InvalidDescriptor, "polynomial is not constant");
    return terms_[0].coef;
  }

  [[nodiscard]] long total_degree() const {
    if (terms_.empty()) fail(ErrorKind::ZeroPolynomial, "total_degree of zero polynomial");
    return static_cast<long>(terms_.front().mono.degree());
  }

  [[nodiscard]] bool is_homogeneous() const noexcept {
    if (terms_.empty()) return true;
    const auto d = terms_.front().mono.degree();
    return terms_.back().mono.degree() == d;
  }

  /// Largest exponent of one variable over all terms.
  [[nodiscard]] Monomial::Exponent degree_in(std::size_t var) const {
    Monomial::Exponent out = 0;
    for (const auto& t : terms_) out = std::max(out, t.mono[var]);
    return out;
  }

  /// Smallest exponent of one variable over all terms: the power of that
  /// variable dividing the polynomial.
  [[nodiscard]] Monomial::Exponent min_exponent(std::size_t var) const {
    if (terms_.empty()) fail(ErrorKind::ZeroPolynomial, "valuation of zero polynomial");
    auto out = terms_.front().mono[var];
    for (const auto& t : terms_) out = std::min(out, t.mono[var]);
    return out;
  }

  [[nodiscard]] Rational coefficient(const Monomial& m) const {
    auto it = std::lower_bound(terms_.begin(), terms_.end(), m,
                               [](const Term& t, const Monomial& key) { return t.mono > key; });
    if (it != terms_.end() && it->mono == m) return it->coef;
    return 0;
  }

  MultiPoly& operator+=(const MultiPoly& other) { return *this = merge(*this, other, false); }
  MultiPoly& operator-=(const MultiPoly& other) { return *this = merge(*this, other, true); }
  MultiPoly& operator*=(const MultiPoly& other) { return *this = *this * other; }
  MultiPoly& operator*=(const Rational& c) {
    if (c == 0) {
      terms_.clear();
    } else {
      const Rational s = canonical(c);
      for (auto& t : terms_) t.coef *= s;
    }
    return *this;
  }

  friend MultiPoly operator+(const MultiPoly& a, const MultiPoly& b) { return merge(a, b, false); }
  friend MultiPoly operator-(const MultiPoly& a, const MultiPoly& b) { return merge(a, b, true); }
  friend MultiPoly operator-(MultiPoly a) {
    for (auto& t : a.terms_) t.coef = -t.coef;
    return a;
  }
  friend MultiPoly operator*(MultiPoly a, const Rational& c) { return a *= c; }
  friend MultiPoly operator*(const Rational& c, MultiPoly a) { return a *= c; }
  friend MultiPoly operator+(const MultiPoly& a, const Rational& c) {
    return a + constant(a.nvars(), c);
  }
  friend MultiPoly operator-(const MultiPoly& a, const Rational& c) {
    return a - constant(a.nvars(), c);
  }
  friend MultiPoly operator+(const Rational& c, const MultiPoly& a) { return a + c; }
  friend MultiPoly operator-(const Rational& c, const MultiPoly& a) {
    return constant(a.nvars(), c) - a;
  }

  friend bool operator==(const MultiPoly& a, const MultiPoly& b) {
    return a.nvars_ == b.nvars_ && a.terms_ == b.terms_;
  }

  /// Multiplies by a single term; monomial multiplication preserves order.
  [[nodiscard]] MultiPoly times_term(const Monomial& m, const Rational& c) const {
    MultiPoly out(nvars_);
    if (c == 0) return out;
    out.terms_.reserve(terms_.size());
    const Rational s = canonical(c);
    for (const auto& t : terms_) out.terms_.push_back({t.mono * m, t.coef * s});
    return out;
  }

 private:
  static void check_same_arity(const MultiPoly& a, const MultiPoly& b) {
    if (a.nvars_ != b.nvars_)
      fail(ErrorKind::ArityMismatch, "variable counts " + std::to_string(a.nvars_) + " and " +
                                         std::to_string(b.nvars_) + " differ");
  }

  static MultiPoly merge(const MultiPoly& a, const MultiPoly& b, bool subtract) {
    check_same_arity(a, b);
    MultiPoly out(a.nvars_);
    out.terms_.reserve(a.terms_.size() + b.terms_.size());
    std::size_t i = 0, j = 0;
    while (i < a.terms_.size() || j < b.terms_.size()) {
      if (j == b.terms_.size() || (i < a.terms_.size() && a.terms_[i].mono > b.terms_[j].mono)) {
        out.terms_.push_back(a.terms_[i++]);
      } else if (i == a.terms_.size() || b.terms_[j].mono > a.terms_[i].mono) {
        out.terms_.push_back(b.terms_[j++]);
        if (subtract) out.terms_.back().coef = -out.terms_.back().coef;
      } else {
        Rational c = subtract ? Rational(a.terms_[i].coef - b.terms_[j].coef)
                              : Rational(a.terms_[i].coef + b.terms_[j].coef);
        if (c != 0) out.terms_.push_back({a.terms_[i].mono, std::move(c)});
        ++i;
        ++j;
      }
    }
    return out;
  }

  friend MultiPoly operator*(const MultiPoly& a, const MultiPoly& b);

  std::size_t nvars_ = 0;
  std::vector<Term> terms_;
};

/// Heap-merge product: each term of the shorter factor spawns a sorted stream
/// over the longer factor; the streams are merged in descending order.
inline MultiPoly operator*(const MultiPoly& a, const MultiPoly& b) {
  if (a.nvars_ != b.nvars_)
    fail(ErrorKind::ArityMismatch, "variable counts differ in product");
  const MultiPoly& small = a.size() <= b.size() ? a : b;
  const MultiPoly& big = a.size() <= b.size() ? b : a;
  MultiPoly out(a.nvars_);
  if (small.is_zero()) return out;
  if (small.size() == 1) return big.times_term(small.terms_[0].mono, small.terms_[0].coef);

  struct Entry {
    Monomial mono;
    std::size_t i;
    std::size_t j;
  };
  auto less = [](const Entry& x, const Entry& y) { return x.mono < y.mono; };
  std::priority_queue<Entry, std::vector<Entry>, decltype(less)> heap(less);
  for (std::size_t i = 0; i < small.size(); ++i)
    heap.push({small.terms_[i].mono * big.terms_[0].mono, i, 0});

  Rational acc;
  Rational prod;
  while (!heap.empty()) {
    Entry top = heap.top();
    heap.pop();
    mpq_mul(prod.get_mpq_t(), small.terms_[top.i].coef.get_mpq_t(),
            big.terms_[top.j].coef.get_mpq_t());
    if (!out.terms_.empty() && out.terms_.back().mono == top.mono) {
      out.terms_.back().coef += prod;
    } else {
      if (!out.terms_.empty() && out.terms_.back().coef == 0) out.terms_.pop_back();
      out.terms_.push_back({top.mono, prod});
    }
    if (top.j + 1 < big.size()) {
      ++top.j;
      top.mono = small.terms_[top.i].mono * big.terms_[top.j].mono;
      heap.push(std::move(top));
    }
  }
  if (!out.terms_.empty() && out.terms_.back().coef == 0) out.terms_.pop_back();
  return out;
}

inline MultiPoly add(const MultiPoly& a, const MultiPoly& b) { return a + b; }
inline MultiPoly mul(const MultiPoly& a, const MultiPoly& b) { return a * b; }

inline MultiPoly pow(const MultiPoly& p, unsigned exponent) {
  MultiPoly out = MultiPoly::constant(p.nvars(), 1);
  if (p.size() <= 4) {
    for (unsigned k = 0; k < exponent; ++k) out = out * p;
    return out;
  }
  MultiPoly base = p;
  while (exponent > 0) {
    if (exponent & 1u) out = out * base;
    exponent >>= 1u;
    if (exponent > 0) base = base * base;
  }
  return out;
}

/// Nonzero total degree check used by several operations.
inline long total_degree(const MultiPoly& p) { return p.total_degree(); }
inline bool is_homogeneous(const MultiPoly& p) { return p.is_homogeneous(); }

namespace detail {

inline MultiPoly multiply_power(MultiPoly acc, const MultiPoly& factor, unsigned times) {
  if (times == 0 || acc.is_zero()) return acc;
  if (factor.is_constant()) return acc * pow(factor.constant_value(), times);
  for (unsigned k = 0; k < times; ++k) acc = acc * factor;
  return acc;
}

// Nested Horner evaluation over terms sorted lexicographically descending;
// all terms in `terms` agree on the exponents of variables below `var`.
inline MultiPoly horner(std::span<const Term* const> terms, std::size_t var,
                        std::span<const MultiPoly> images, std::size_t out_nvars) {
  if (var == images.size()) return MultiPoly::constant(out_nvars, terms.front()->coef);
  MultiPoly acc(out_nvars);
  Monomial::Exponent prev = terms.front()->mono[var];
  std::size_t begin = 0;
  while (begin < terms.size()) {
    const Monomial::Exponent e = terms[begin]->mono[var];
    std::size_t end = begin;
    while (end < terms.size() && terms[end]->mono[var] == e) ++end;
    acc = multiply_power(std::move(acc), images[var], prev - e);
    acc += horner(terms.subspan(begin, end - begin), var + 1, images, out_nvars);
    prev = e;
    begin = end;
  }
  return multiply_power(std::move(acc), images[var], prev);
}

}  // namespace detail

namespace detail {

// Dense bivariate integer polynomial on the box [0, nu) x [0, nv). Used to
// substitute small images into large homogeneous polynomials.
struct Dense2 {
  std::size_t nu = 0;
  std::size_t nv = 0;
  std::vector<Integer> c;

  Dense2() = default;
  Dense2(std::size_t u, std::size_t v) : nu(u), nv(v), c(u * v) {}
  Integer& at(std::size_t i, std::size_t j) { return c[i * nv + j]; }
  [[nodiscard]] const Integer& at(std::size_t i, std::size_t j) const { return c[i * nv + j]; }
};

struct SmallTerm {
  std::uint32_t a;
  std::uint32_t b;
  Integer coef;
};
using SmallPoly = std::vector<SmallTerm>;

inline Dense2 dense_constant(const Integer& v) {
  Dense2 d(1, 1);
  d.c[0] = v;
  return d;
}

inline bool is_unit(const SmallPoly& g) {
  return g.size() == 1 && g[0].a == 0 && g[0].b == 0 && g[0].coef == 1;
}

// Product x * g, keeping only rows below `cap` in the first variable.
inline Dense2 dense_mul(const Dense2& x, const SmallPoly& g, std::size_t cap = SIZE_MAX) {
  std::uint32_t ma = 0, mb = 0;
  for (const auto& t : g) {
    ma = std::max(ma, t.a);
    mb = std::max(mb, t.b);
  }
  Dense2 out(std::min(x.nu + ma, cap), x.nv + mb);
  for (std::size_t i = 0; i < x.nu; ++i)
    for (std::size_t j = 0; j < x.nv; ++j) {
      const Integer& v = x.at(i, j);
      if (sgn(v) == 0) continue;
      for (const auto& t : g)
        if (i + t.a < out.nu)
          mpz_addmul(out.at(i + t.a, j + t.b).get_mpz_t(), v.get_mpz_t(), t.coef.get_mpz_t());
    }
  return out;
}

// acc += s * b
inline void dense_add_scaled(Dense2& acc, const Dense2& b, const Integer& s) {
  if (b.nu > acc.nu || b.nv > acc.nv) {
    Dense2 grown(std::max(acc.nu, b.nu), std::max(acc.nv, b.nv));
    for (std::size_t i = 0; i < acc.nu; ++i)
      for (std::size_t j = 0; j < acc.nv; ++j) grown.at(i, j).swap(acc.at(i, j));
    acc = std::move(grown);
  }
  for (std::size_t i = 0; i < b.nu; ++i)
    for (std::size_t j = 0; j < b.nv; ++j) {
      const Integer& v = b.at(i, j);
      if (sgn(v) != 0) mpz_addmul(acc.at(i, j).get_mpz_t(), v.get_mpz_t(), s.get_mpz_t());
    }
}

struct DenseContext {
  std::vector<SmallPoly> images;
  std::vector<Dense2> last_powers;
  std::size_t cap = SIZE_MAX;

  const Dense2& last_power(unsigned e) {
    if (last_powers.empty()) last_powers.push_back(dense_constant(1));
    while (last_powers.size() <= e)
      last_powers.push_back(dense_mul(last_powers.back(), images.back(), cap));
    return last_powers[e];
  }
};

using IntTerm = std::pair<const Monomial*, Integer>;

// Same nesting as horner(); the last variable uses cached powers because its
// groups are single terms for homogeneous input.
inline Dense2 dense_horner(std::span<const IntTerm> terms, std::size_t var, DenseContext& ctx) {
  Dense2 acc = dense_constant(0);
  if (var + 1 == ctx.images.size()) {
    for (const auto& [m, c] : terms) dense_add_scaled(acc, ctx.last_power((*m)[var]), c);
    return acc;
  }
  const SmallPoly& g = ctx.images[var];
  const bool unit = is_unit(g);
  Monomial::Exponent prev = (*terms.front().first)[var];
  std::size_t begin = 0;
  while (begin < terms.size()) {
    const Monomial::Exponent e = (*terms[begin].first)[var];
    std::size_t end = begin;
    while (end < terms.size() && (*terms[end].first)[var] == e) ++end;
    if (!unit)
      for (auto k = e; k < prev; ++k) acc = dense_mul(acc, g, ctx.cap);
    dense_add_scaled(acc, dense_horner(terms.subspan(begin, end - begin), var + 1, ctx), Integer(1));
    prev = e;
    begin = end;
  }
  if (!unit)
    for (Monomial::Exponent k = 0; k < prev; ++k) acc = dense_mul(acc, g, ctx.cap);
  return acc;
}

inline std::vector<IntTerm> lex_integer_terms(const MultiPoly& p) {
  Integer pden = 1;
  for (const auto& t : p.terms()) mpz_lcm(pden.get_mpz_t(), pden.get_mpz_t(), t.coef.get_den_mpz_t());
  std::vector<IntTerm> order;
  order.reserve(p.size());
  for (const auto& t : p.terms()) order.emplace_back(&t.mono, Rational(t.coef * pden).get_num());
  std::sort(order.begin(), order.end(), [](const IntTerm& a, const IntTerm& b) {
    const auto ea = a.first->exponents();
    const auto eb = b.first->exponents();
    return std::lexicographical_compare(eb.begin(), eb.end(), ea.begin(), ea.end());
  });
  return order;
}

// Substitution for homogeneous p with images in at most three variables,
// computed densely over the integers. Homogeneous images of one degree are
// dehomogenized in their last variable and the result rehomogenized.
inline std::optional<MultiPoly> dense_substitute(const MultiPoly& p, std::span<const MultiPoly> images,
                                                 std::size_t out_nvars) {
  if (!p.is_homogeneous() || out_nvars == 0 || out_nvars > 3) return std::nullopt;
  Integer den = 1;
  long delta = -1;
  bool homog = out_nvars >= 2;
  for (const auto& im : images) {
    for (const auto& t : im.terms())
      mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), t.coef.get_den_mpz_t());
    if (im.is_zero()) continue;
    if (!im.is_homogeneous() || (delta >= 0 && im.total_degree() != delta)) homog = false;
    delta = im.total_degree();
  }
  if (delta < 0) homog = false;
  const std::size_t k = homog ? out_nvars - 1 : out_nvars;
  if (k > 2) return std::nullopt;

  DenseContext ctx;
  for (const auto& im : images) {
    SmallPoly g;
    for (const auto& t : im.terms()) {
      Rational scaled = t.coef * den;
      g.push_back({k >= 1 ? t.mono[0] : 0u, k >= 2 ? t.mono[1] : 0u, scaled.get_num()});
    }
    ctx.images.push_back(std::move(g));
  }

  Integer pden = 1;
  for (const auto& t : p.terms()) mpz_lcm(pden.get_mpz_t(), pden.get_mpz_t(), t.coef.get_den_mpz_t());
  Dense2 r = dense_horner(lex_integer_terms(p), 0, ctx);

  const auto m = static_cast<unsigned long>(p.total_degree());
  Integer scale_den;
  mpz_pow_ui(scale_den.get_mpz_t(), den.get_mpz_t(), m);
  scale_den *= pden;
  const long total = homog ? static_cast<long>(m) * delta : 0;
  std::vector<Term> terms;
  for (std::size_t i = 0; i < r.nu; ++i)
    for (std::size_t j = 0; j < r.nv; ++j) {
      if (sgn(r.at(i, j)) == 0) continue;
      Monomial mono(out_nvars);
      if (k >= 1) mono.set(0, static_cast<Monomial::Exponent>(i));
      if (k >= 2) mono.set(1, static_cast<Monomial::Exponent>(j));
      if (homog) mono.set(out_nvars - 1, static_cast<Monomial::Exponent>(total - static_cast<long>(i + j)));
      Rational c(r.at(i, j), scale_den);
      c.canonicalize();
      terms.push_back({std::move(mono), std::move(c)});
    }
  return MultiPoly::from_terms(out_nvars, std::move(terms));
}

// Exponent of variable `var` dividing p(images) for images in two
// variables, working modulo growing powers of that variable. Returns
// nullopt when the composition is identically zero. p must be homogeneous.
inline std::optional<long> dense_valuation(const MultiPoly& p, std::span<const MultiPoly> images,
                                           std::size_t var) {
  // one common scale keeps homogeneous p proportional to the true composition
  Integer den = 1;
  for (const auto& im : images)
    for (const auto& t : im.terms()) mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), t.coef.get_den_mpz_t());
  DenseContext ctx;
  for (const auto& im : images) {
    SmallPoly g;
    for (const auto& t : im.terms()) {
      Rational scaled = t.coef * den;
      g.push_back({t.mono[var], t.mono[1 - var], scaled.get_num()});
    }
    ctx.images.push_back(std::move(g));
  }
  std::size_t bound = 1;
  for (const auto& t : p.terms()) {
    std::size_t b = 1;
    for (std::size_t i = 0; i < images.size(); ++i)
      if (t.mono[i] != 0) b += static_cast<std::size_t>(t.mono[i]) * images[i].degree_in(var);
    bound = std::max(bound, b);
  }
  const auto order = lex_integer_terms(p);
  for (std::size_t cap = 8;; cap *= 4) {
    ctx.cap = std::min(cap, bound);
    ctx.last_powers.clear();
    Dense2 r = dense_horner(order, 0, ctx);
    for (std::size_t i = 0; i < r.nu; ++i)
      for (std::size_t j = 0; j < r.nv; ++j)
        if (sgn(r.at(i, j)) != 0) return static_cast<long>(i);
    if (ctx.cap == bound) return std::nullopt;
  }
}

}  // namespace detail

/// Composition P(images[0], ..., images[n-1]).
inline MultiPoly substitute(const MultiPoly& p, std::span<const MultiPoly> images) {
  if (images.size() != p.nvars())
    fail(ErrorKind::ArityMismatch, "substitute expects " + std::to_string(p.nvars()) +
                                       " images, got " + std::to_string(images.size()));
  if (images.empty()) fail(ErrorKind::ArityMismatch, "substitute needs at least one image");
  const std::size_t out_nvars = images.front().nvars();
  for (const auto& im : images)
    if (im.nvars() != out_nvars) fail(ErrorKind::ArityMismatch, "images have mixed arity");
  if (p.is_zero()) return MultiPoly(out_nvars);
  if (p.size() > 8)
    if (auto fast = detail::dense_substitute(p, images, out_nvars)) return std::move(*fast);

  std::vector<const Term*> order;
  order.reserve(p.size());
  for (const auto& t : p.terms()) order.push_back(&t);
  std::sort(order.begin(), order.end(), [](const Term* a, const Term* b) {
    const auto ea = a->mono.exponents();
    const auto eb = b->mono.exponents();
    return std::lexicographical_compare(eb.begin(), eb.end(), ea.begin(), ea.end());
  });
  return detail::horner(order, 0, images, out_nvars);
}

inline MultiPoly substitute(const MultiPoly& p, std::initializer_list<MultiPoly> images) {
  return substitute(p, std::span<const MultiPoly>(images.begin(), images.size()));
}

/// Exact division by single-divisor leading-term reduction, streamed through
/// a heap of divisor-tail products (quotient terms appear in descending
/// order). Returns nullopt as soon as a reduction step leaves a remainder.
inline std::optional<MultiPoly> exact_divide(const MultiPoly& p, const MultiPoly& d) {
  if (d.is_zero()) fail(ErrorKind::DivisionByZero, "exact_divide by the zero polynomial");
  if (p.nvars() != d.nvars()) fail(ErrorKind::ArityMismatch, "exact_divide arity mismatch");
  const std::size_t n = p.nvars();
  if (p.is_zero()) return MultiPoly(n);

  const Term& lead = d.terms().front();
  const auto& pt = p.terms();
  if (d.size() == 1) {
    std::vector<Term> q;
    q.reserve(pt.size());
    for (const auto& t : pt) {
      if (!lead.mono.divides(t.mono)) return std::nullopt;
      q.push_back({t.mono / lead.mono, t.coef / lead.coef});
    }
    return MultiPoly::from_canonical_terms(n, std::move(q));
  }
  if (p.is_homogeneous() && d.is_homogeneous() && p.total_degree() < d.total_degree())
    return std::nullopt;

  const std::span<const Term> tail(d.terms().data() + 1, d.size() - 1);
  struct Entry {
    Monomial mono;
    std::size_t tail_index;
    std::size_t quotient_index;
  };
  auto less = [](const Entry& x, const Entry& y) { return x.mono < y.mono; };
  std::priority_queue<Entry, std::vector<Entry>, decltype(less)> heap(less);
  std::vector<std::size_t> waiting(tail.size());
  for (std::size_t i = 0; i < tail.size(); ++i) waiting[i] = i;

  std::vector<Term> q;
  std::size_t pi = 0;
  Rational c;
  Rational prod;
  while (pi < pt.size() || !heap.empty()) {
    Monomial m;
    if (heap.empty() || (pi < pt.size() && pt[pi].mono > heap.top().mono)) {
      m = pt[pi].mono;
    } else {
      m = heap.top().mono;
    }
    c = 0;
    if (pi < pt.size() && pt[pi].mono == m) c = pt[pi++].coef;
    while (!heap.empty() && heap.top().mono == m) {
      Entry e = heap.top();
      heap.pop();
      mpq_mul(prod.get_mpq_t(), q[e.quotient_index].coef.get_mpq_t(),
              tail[e.tail_index].coef.get_mpq_t());
      c -= prod;
      if (e.quotient_index + 1 < q.size()) {
        ++e.quotient_index;
        e.mono = q[e.quotient_index].mono * tail[e.tail_index].mono;
        heap.push(std::move(e));
      } else {
        waiting.push_back(e.tail_index);
      }
    }
    if (c == 0) continue;
    if (!lead.mono.divides(m)) return std::nullopt;
    q.push_back({m / lead.mono, c / lead.coef});
    const std::size_t qi = q.size() - 1;
    for (auto ti : waiting) heap.push({q[qi].mono * tail[ti].mono, ti, qi});
    waiting.clear();
  }
  return MultiPoly::from_canonical_terms(n, std::move(q));
}

struct PowerSplit {
  int exponent = 0;
  MultiPoly cofactor;
};

namespace detail {

// Repeated synthetic division of a ternary form by a linear form, on a dense
// (D+1) x (D+1) grid of coefficients. Stops after max_times quotients.
inline std::optional<PowerSplit> ternary_linear_power(const MultiPoly& p, const MultiPoly& d,
                                                      int max_times) {
  if (p.nvars() != 3 || !p.is_homogeneous() || d.total_degree() != 1 || !d.is_homogeneous())
    return std::nullopt;
  std::array<Rational, 3> k{d.coefficient(Monomial{1, 0, 0}), d.coefficient(Monomial{0, 1, 0}),
                            d.coefficient(Monomial{0, 0, 1})};
  // pivot: a variable with the simplest nonzero coefficient
  std::size_t v = 3;
  for (std::size_t i = 0; i < 3; ++i) {
    if (k[i] == 0) continue;
    if (v == 3 || (abs(k[i]) == 1 && abs(k[v]) != 1)) v = i;
  }
  const std::size_t s = v == 0 ? 1 : 0;
  const std::size_t t = v == 2 ? 1 : 2;
  const Rational a = k[v], b = k[s], c = k[t];
  const Rational inv_a = 1 / a;

  long deg = p.total_degree();
  const auto width = static_cast<std::size_t>(deg) + 1;
  std::vector<Rational> cur(width * width);
  for (const auto& term : p.terms()) cur[term.mono[v] * width + term.mono[s]] = term.coef;

  PowerSplit out;
  std::vector<Rational> q(width * width);
  while (out.exponent < max_times && deg > 0) {
    // p[i][j] = a q[i-1][j] + b q[i][j-1] + c q[i][j], q of degree deg-1
    for (auto& x : q) x = 0;
    for (long i = deg; i >= 1; --i)
      for (long j = 0; i + j <= deg; ++j) {
        Rational r = cur[static_cast<std::size_t>(i) * width + static_cast<std::size_t>(j)];
        if (i + j <= deg - 1) {
          if (j >= 1 && b != 0) r -= b * q[static_cast<std::size_t>(i) * width + static_cast<std::size_t>(j - 1)];
          if (c != 0) r -= c * q[static_cast<std::size_t>(i) * width + static_cast<std::size_t>(j)];
        } else if (j >= 1 && b != 0) {
          r -= b * q[static_cast<std::size_t>(i) * width + static_cast<std::size_t>(j - 1)];
        }
        if (r != 0) q[static_cast<std::size_t>(i - 1) * width + static_cast<std::size_t>(j)] = r * inv_a;
      }
    bool exact = true;
    for (long j = 0; j <= deg && exact; ++j) {
      Rational r = cur[static_cast<std::size_t>(j)];
      if (j >= 1) r -= b * q[static_cast<std::size_t>(j - 1)];
      if (j <= deg - 1) r -= c * q[static_cast<std::size_t>(j)];
      exact = r == 0;
    }
    if (!exact) break;
    std::swap(cur, q);
    --deg;
    ++out.exponent;
  }
  std::vector<Term> terms;
  for (long i = 0; i <= deg; ++i)
    for (long j = 0; i + j <= deg; ++j) {
      const Rational& x = cur[static_cast<std::size_t>(i) * width + static_cast<std::size_t>(j)];
      if (x == 0) continue;
      Monomial m(3);
      m.set(v, static_cast<Monomial::Exponent>(i));
      m.set(s, static_cast<Monomial::Exponent>(j));
      m.set(t, static_cast<Monomial::Exponent>(deg - i - j));
      terms.push_back({m, x});
    }
  out.cofactor = MultiPoly::from_terms(3, std::move(terms));
  return out;
}

}  // namespace detail

/// Largest t <= max_times with d^t | p, together with p / d^t.
inline PowerSplit extract_power(const MultiPoly& p, const MultiPoly& d, int max_times = INT_MAX) {
  if (p.is_zero()) fail(ErrorKind::ZeroPolynomial, "extract_power of the zero polynomial");
  if (d.is_constant()) fail(ErrorKind::DivisionByZero, "extract_power needs a non-unit divisor");
  if (p.size() > 16)
    if (auto fast = detail::ternary_linear_power(p, d, max_times)) return std::move(*fast);
  PowerSplit out{0, p};
  while (out.exponent < max_times) {
    auto q = exact_divide(out.cofactor, d);
    if (!q) break;
    out.cofactor = std::move(*q);
    ++out.exponent;
  }
  return out;
}

/// Divides by var^k where the caller knows the power divides every term.
inline MultiPoly divide_by_variable_power(const MultiPoly& p, std::size_t var,
                                          Monomial::Exponent k) {
  if (k == 0) return p;
  Monomial m(p.nvars());
  m.set(var, k);
  std::vector<Term> out;
  out.reserve(p.size());
  for (const auto& t : p.terms()) {
    if (t.mono[var] < k) fail(ErrorKind::InvalidDescriptor, "variable power does not divide");
    out.push_back({t.mono / m, t.coef});
  }
  return MultiPoly::from_canonical_terms(p.nvars(), std::move(out));
}

inline MultiPoly derivative(const MultiPoly& p, std::size_t var) {
  if (var >= p.nvars()) fail(ErrorKind::ArityMismatch, "derivative variable out of range");
  std::vector<Term> out;
  for (const auto& t : p.terms()) {
    const auto e = t.mono[var];
    if (e == 0) continue;
    Monomial m = t.mono;
    m.set(var, e - 1);
    out.push_back({std::move(m), t.coef * e});
  }
  return MultiPoly::from_terms(p.nvars(), std::move(out));
}

/// Determinant of a square matrix of polynomials (Laplace expansion along
/// rows, memoised on the set of remaining columns).
inline MultiPoly determinant(const std::vector<std::vector<MultiPoly>>& matrix) {
  const std::size_t n = matrix.size();
  if (n == 0) fail(ErrorKind::DimensionMismatch, "determinant of an empty matrix");
  if (n > 20) fail(ErrorKind::DimensionMismatch, "determinant too large for Laplace expansion");
  for (const auto& row : matrix)
    if (row.size() != n) fail(ErrorKind::DimensionMismatch, "determinant needs a square matrix");
  const std::size_t nvars = matrix[0][0].nvars();
  std::vector<std::optional<MultiPoly>> memo(std::size_t{1} << n);
  auto rec = [&](auto&& self, std::size_t row, std::size_t cols) -> MultiPoly {
    if (row == n) return MultiPoly::constant(nvars, 1);
    if (memo[cols]) return *memo[cols];
    MultiPoly acc(nvars);
    int sign = 1;
    for (std::size_t j = 0; j < n; ++j) {
      if (!(cols & (std::size_t{1} << j))) continue;
      if (!matrix[row][j].is_zero()) {
        MultiPoly minor = self(self, row + 1, cols & ~(std::size_t{1} << j));
        MultiPoly termv = matrix[row][j] * minor;
        if (sign > 0) acc += termv; else acc -= termv;
      }
      sign = -sign;
    }
    memo[cols] = acc;
    return acc;
  };
  return rec(rec, 0, (std::size_t{1} << n) - 1);
}

inline MultiPoly jacobian_det(std::span<const MultiPoly> components) {
  const std::size_t n = components.size();
  if (n == 0) fail(ErrorKind::DimensionMismatch, "jacobian of an empty system");
  for (const auto& c : components)
    if (c.nvars() != n)
      fail(ErrorKind::DimensionMismatch, "jacobian needs as many components as variables");
  std::vector<std::vector<MultiPoly>> m(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) m[i].push_back(derivative(components[i], j));
  return determinant(m);
}

inline Rational evaluate(const MultiPoly& p, std::span<const Rational> point) {
  if (point.size() != p.nvars()) fail(ErrorKind::ArityMismatch, "evaluate arity mismatch");
  Rational out = 0;
  Rational tv;
  for (const auto& t : p.terms()) {
    tv = t.coef;
    for (std::size_t i = 0; i < point.size(); ++i)
      if (t.mono[i] != 0) tv *= pow(point[i], t.mono[i]);
    out += tv;
  }
  return out;
}

/// p(base + t * direction) as a polynomial in the single variable t.
inline MultiPoly restrict_to_line(const MultiPoly& p, std::span<const Rational> base,
                                  std::span<const Rational> direction) {
  if (base.size() != p.nvars() || direction.size() != p.nvars())
    fail(ErrorKind::ArityMismatch, "restrict_to_line arity mismatch");
  if (std::all_of(direction.begin(), direction.end(), [](const Rational& r) { return r == 0; }))
    fail(ErrorKind::ArityMismatch, "restrict_to_line needs a nonzero direction");
  std::vector<MultiPoly> images;
  const MultiPoly t = MultiPoly::variable(1, 0);
  for (std::size_t i = 0; i < base.size(); ++i)
    images.push_back(MultiPoly::constant(1, base[i]) + t * direction[i]);
  return substitute(p, images);
}

namespace detail {

inline std::vector<Rational> to_dense(const MultiPoly& p) {
  if (p.nvars() != 1) fail(ErrorKind::ArityMismatch, "expected a univariate polynomial");
  std::vector<Rational> c(p.is_zero() ? 0 : p.total_degree() + 1);
  for (const auto& t : p.terms()) c[t.mono[0]] = t.coef;
  return c;
}

inline MultiPoly from_dense(const std::vector<Rational>& c) {
  std::vector<Term> terms;
  for (std::size_t i = c.size(); i-- > 0;)
    if (c[i] != 0) terms.push_back({Monomial{static_cast<Monomial::Exponent>(i)}, c[i]});
  return MultiPoly::from_canonical_terms(1, std::move(terms));
}

inline void trim(std::vector<Rational>& c) {
  while (!c.empty() && c.back() == 0) c.pop_back();
}

// a mod b for dense coefficient vectors (b nonzero, trimmed)
inline void remainder_in_place(std::vector<Rational>& a, const std::vector<Rational>& b) {
  trim(a);
  const std::size_t db = b.size() - 1;
  Rational f;
  while (a.size() >= b.size()) {
    f = a.back() / b.back();
    const std::size_t shift = a.size() - 1 - db;
    for (std::size_t i = 0; i <= db; ++i) a[shift + i] -= f * b[i];
    a.pop_back();
    trim(a);
  }
}

inline std::vector<Rational> dense_gcd(std::vector<Rational> a, std::vector<Rational> b) {
  trim(a);
  trim(b);
  while (!b.empty()) {
    remainder_in_place(a, b);
    std::swap(a, b);
  }
  if (!a.empty()) {
    const Rational lc = a.back();
    for (auto& x : a) x /= lc;
  }
  return a;
}

inline constexpr std::uint64_t kModPrime = (1ULL << 61) - 1;

inline std::uint64_t mul_mod(std::uint64_t a, std::uint64_t b) {
  return static_cast<std::uint64_t>(static_cast<unsigned __int128>(a) * b % kModPrime);
}

inline std::uint64_t pow_mod(std::uint64_t a, std::uint64_t e) {
  std::uint64_t r = 1;
  for (; e > 0; e >>= 1, a = mul_mod(a, a))
    if (e & 1) r = mul_mod(r, a);
  return r;
}

// nullopt when the denominator vanishes mod the prime
inline std::optional<std::uint64_t> reduce_mod(const Rational& x) {
  const std::uint64_t n = mpz_fdiv_ui(x.get_num_mpz_t(), kModPrime);
  const std::uint64_t d = mpz_fdiv_ui(x.get_den_mpz_t(), kModPrime);
  if (d == 0) return std::nullopt;
  return mul_mod(n, pow_mod(d, kModPrime - 2));
}

using ModPoly = std::vector<std::uint64_t>;

inline void trim(ModPoly& c) {
  while (!c.empty() && c.back() == 0) c.pop_back();
}

inline ModPoly mod_gcd(ModPoly a, ModPoly b) {
  trim(a);
  trim(b);
  while (!b.empty()) {
    const std::uint64_t inv = pow_mod(b.back(), kModPrime - 2);
    while (a.size() >= b.size()) {
      const std::uint64_t f = mul_mod(a.back(), inv);
      const std::size_t shift = a.size() - b.size();
      for (std::size_t i = 0; i < b.size(); ++i)
        a[shift + i] = (a[shift + i] + kModPrime - mul_mod(f, b[i])) % kModPrime;
      a.pop_back();
      trim(a);
    }
    std::swap(a, b);
  }
  return a;
}

}  // namespace detail

/// True when the univariate polynomials are certainly coprime: their gcd
/// modulo a large prime is constant while no leading coefficient or
/// denominator vanishes there. False means undecided or not coprime.
inline bool coprime_mod_prime(std::span<const MultiPoly> polys) {
  detail::ModPoly g;
  for (const auto& p : polys) {
    if (p.is_zero()) continue;
    const auto dense = detail::to_dense(p);
    detail::ModPoly m;
    for (const auto& c : dense) {
      auto r = detail::reduce_mod(c);
      if (!r) return false;
      m.push_back(*r);
    }
    if (m.back() == 0) return false;
    g = g.empty() ? m : detail::mod_gcd(g, m);
    if (g.size() == 1) return true;
  }
  return false;
}

/// Monic gcd of two univariate polynomials (Euclid over the rationals).
inline MultiPoly univariate_gcd(const MultiPoly& a, const MultiPoly& b) {
  return detail::from_dense(detail::dense_gcd(detail::to_dense(a), detail::to_dense(b)));
}

/// Divides out the rational content so the coefficients are coprime integers
/// with a positive leading coefficient.
inline MultiPoly primitive_part(const MultiPoly& p) {
  if (p.is_zero()) return p;
  Integer num_gcd = 0;
  Integer den_lcm = 1;
  for (const auto& t : p.terms()) {
    mpz_gcd(num_gcd.get_mpz_t(), num_gcd.get_mpz_t(), t.coef.get_num_mpz_t());
    mpz_lcm(den_lcm.get_mpz_t(), den_lcm.get_mpz_t(), t.coef.get_den_mpz_t());
  }
  Rational scale(den_lcm, num_gcd);
  scale.canonicalize();
  if (p.leading().coef < 0) scale = -scale;
  return p * scale;
}

inline std::string to_string(const MultiPoly& p, std::span<const std::string> names = {}) {
  if (p.is_zero()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& t : p.terms()) {
    Rational c = t.coef;
    const bool negative = c < 0;
    if (negative) c = -c;
    if (first) {
      if (negative) os << "-";
    } else {
      os << (negative ? " - " : " + ");
    }
    first = false;
    const bool unit = (c == 1);
    bool wrote = false;
    if (!unit || t.mono.degree() == 0) {
      os << c.get_str();
      wrote = true;
    }
    for (std::size_t i = 0; i < t.mono.size(); ++i) {
      if (t.mono[i] == 0) continue;
      if (wrote) os << "*";
      if (i < names.size()) os << names[i]; else os << "x" << i;
      if (t.mono[i] > 1) os << "^" << t.mono[i];
      wrote = true;
    }
  }
  return os.str();
}

inline std::ostream& operator<<(std::ostream& os, const MultiPoly& p) {
  return os << to_string(p, std::span<const std::string>{});
}

/// Named generators for writing polynomials by hand: auto [x, y, z] = ...
inline std::vector<MultiPoly> variables(std::size_t nvars) {
  std::vector<MultiPoly> out;
  for (std::size_t i = 0; i < nvars; ++i) out.push_back(MultiPoly::variable(nvars, i));
  return out;
}

}  // namespace birdeg
