#pragma once

#include <algorithm>
#include <cstddef>
#include <ostream>
#include <string>
#include <vector>

#include "birdeg/errors.hpp"
#include "birdeg/rational.hpp"

namespace birdeg {

/// A point of projective space, scaled so its first nonzero coordinate is 1.
class ProjectivePoint {
 public:
  ProjectivePoint() = default;
  explicit ProjectivePoint(std::vector<Rational> coords) : coords_(std::move(coords)) {
    auto it = std::find_if(coords_.begin(), coords_.end(), [](const Rational& r) { return r != 0; });
    if (it == coords_.end()) fail(ErrorKind::InvalidDescriptor, "projective point with all coordinates zero");
    const Rational lead = *it;
    for (auto& c : coords_) c /= lead;
  }
  ProjectivePoint(std::initializer_list<Rational> coords)
      : ProjectivePoint(std::vector<Rational>(coords)) {}

  [[nodiscard]] const std::vector<Rational>& coords() const noexcept { return coords_; }
  [[nodiscard]] std::size_t size() const noexcept { return coords_.size(); }
  [[nodiscard]] const Rational& operator[](std::size_t i) const { return coords_[i]; }

  /// Index of the first nonzero coordinate (where the point equals 1).
  [[nodiscard]] std::size_t pivot() const {
    for (std::size_t i = 0; i < coords_.size(); ++i)
      if (coords_[i] != 0) return i;
    fail(ErrorKind::InvalidDescriptor, "empty projective point");
  }

  friend bool operator==(const ProjectivePoint&, const ProjectivePoint&) = default;

 private:
  std::vector<Rational> coords_;
};

inline std::string to_string(const ProjectivePoint& p) {
  std::string out = "[";
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (i) out += ":";
    out += p[i].get_str();
  }
  return out + "]";
}

inline std::ostream& operator<<(std::ostream& os, const ProjectivePoint& p) {
  return os << to_string(p);
}

}  // namespace birdeg
