#pragma once

#include "skelrot/rational.hpp"

namespace skelrot {

struct PlanarRational {
  Rational x;
  Rational y;

  friend bool operator==(const PlanarRational& a, const PlanarRational& b) {
    return a.x == b.x && a.y == b.y;
  }
  friend bool operator!=(const PlanarRational& a, const PlanarRational& b) { return !(a == b); }
  // Lexicographic order, x first.
  friend bool operator<(const PlanarRational& a, const PlanarRational& b) {
    int c = cmp(a.x, b.x);
    return c < 0 || (c == 0 && a.y < b.y);
  }
  friend PlanarRational operator-(const PlanarRational& a, const PlanarRational& b) {
    return {a.x - b.x, a.y - b.y};
  }
  friend PlanarRational operator+(const PlanarRational& a, const PlanarRational& b) {
    return {a.x + b.x, a.y + b.y};
  }
  PlanarRational swapped() const { return {y, x}; }
};

inline Rational cross(const PlanarRational& o, const PlanarRational& a, const PlanarRational& b) {
  return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x);
}

inline Rational dot(const PlanarRational& a, const PlanarRational& b) { return a.x * b.x + a.y * b.y; }

}  // namespace skelrot
