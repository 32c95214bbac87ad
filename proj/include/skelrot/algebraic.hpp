#pragma once

#include <cmath>
#include <cstdint>
#include <memory>
#include <stdexcept>
#include <type_traits>

#include "skelrot/rational.hpp"

namespace skelrot {

inline long double to_long_double(const Rational& x) {
  // Two-step conversion keeps extended precision for large numerators.
  long double hi = x.get_d();
  Rational rest = x - Rational(static_cast<double>(hi));
  return hi + static_cast<long double>(rest.get_d());
}

inline RationalInterval enclose(const Rational& x, int) { return {x, x}; }

// Element a + b*sqrt(r) of a quadratic extension of Base, with r >= 0 shared
// by every element that takes part in the same computation.  Nesting
// QuadExt<QuadExt<Rational>> gives the two-level radicals that describe the
// Markov arc endpoints.
template <class Base>
class QuadExt {
 public:
  QuadExt() = default;
  QuadExt(Base a) : a_(std::move(a)) {}  // NOLINT: implicit promotion is intended
  template <class B = Base>
    requires(!std::is_same_v<B, Rational>)
  QuadExt(const Rational& r) : a_(r) {}  // NOLINT
  QuadExt(Base a, Base b, std::shared_ptr<const Base> radicand)
      : a_(std::move(a)), b_(std::move(b)), r_(std::move(radicand)) {}

  // coef * sqrt(radicand)
  static QuadExt root(const Base& coef, const Base& radicand) {
    if (sign(radicand) < 0) throw std::domain_error("negative radicand");
    return QuadExt(Base(Rational(0)), coef, std::make_shared<const Base>(radicand));
  }

  const Base& a() const { return a_; }
  const Base& b() const { return b_; }
  const std::shared_ptr<const Base>& radicand() const { return r_; }

  friend QuadExt operator+(const QuadExt& x, const QuadExt& y) {
    return QuadExt(x.a_ + y.a_, x.b_ + y.b_, common(x, y));
  }
  friend QuadExt operator-(const QuadExt& x, const QuadExt& y) {
    return QuadExt(x.a_ - y.a_, x.b_ - y.b_, common(x, y));
  }
  friend QuadExt operator-(const QuadExt& x) { return QuadExt(-x.a_, -x.b_, x.r_); }
  friend QuadExt operator*(const QuadExt& x, const QuadExt& y) {
    auto r = common(x, y);
    if (!r) return QuadExt(x.a_ * y.a_);
    return QuadExt(x.a_ * y.a_ + x.b_ * y.b_ * (*r), x.a_ * y.b_ + x.b_ * y.a_, r);
  }

  friend int sign(const QuadExt& x) {
    int sa = sign(x.a_);
    if (!x.r_) return sa;
    int sb = sign(x.b_);
    if (sb == 0 || sign(*x.r_) == 0) return sa;
    if (sa == 0 || sa == sb) return sb;
    int s = sign(x.a_ * x.a_ - x.b_ * x.b_ * (*x.r_));
    return s > 0 ? sa : (s < 0 ? sb : 0);
  }

  friend long double to_long_double(const QuadExt& x) {
    long double v = to_long_double(x.a_);
    if (x.r_) v += to_long_double(x.b_) * std::sqrt(std::max(0.0L, to_long_double(*x.r_)));
    return v;
  }
  friend double to_double(const QuadExt& x) { return static_cast<double>(to_long_double(x)); }

  // Rigorous enclosure; square roots are bounded to `bits` fractional bits.
  friend RationalInterval enclose(const QuadExt& x, int bits) {
    RationalInterval ea = enclose(x.a_, bits);
    if (!x.r_) return ea;
    RationalInterval er = enclose(*x.r_, bits);
    if (er.lo < 0) er.lo = 0;
    RationalInterval s{sqrt_bounds(er.lo, bits).lo, sqrt_bounds(er.hi, bits).hi};
    return ea + enclose(x.b_, bits) * s;
  }

  friend std::int64_t floor_int(const QuadExt& x) {
    RationalInterval e = enclose(x, 64);
    std::int64_t k = floor_int(e.hi);
    if (floor_int(e.lo) == k) return k;
    return sign(x - QuadExt(Rational(static_cast<long>(k)))) >= 0 ? k : k - 1;
  }

 private:
  static std::shared_ptr<const Base> common(const QuadExt& x, const QuadExt& y) {
    if (!x.r_ || sign(x.b_) == 0) return y.r_;
    if (!y.r_ || sign(y.b_) == 0) return x.r_;
    if (x.r_ == y.r_ || sign(*x.r_ - *y.r_) == 0) return x.r_;
    throw std::logic_error("arithmetic across different quadratic extensions");
  }

  Base a_{Rational(0)};
  Base b_{Rational(0)};
  std::shared_ptr<const Base> r_;
};

using Quad1 = QuadExt<Rational>;
using Quad2 = QuadExt<Quad1>;

template <class Base>
struct ScalarTraits<QuadExt<Base>> {
  static QuadExt<Base> from(const Rational& r) { return QuadExt<Base>(r); }
  static QuadExt<Base> from_int(std::int64_t k) { return QuadExt<Base>(Rational(static_cast<long>(k))); }
};

// Ordering of two numbers from unrelated towers, decided by refining
// enclosures.  Returns -1, 0 (undecided) or 1.
template <class X, class Y>
int compare_enclosed(const X& x, const Y& y, int max_bits = 4096) {
  for (int bits = 64; bits <= max_bits; bits *= 2) {
    RationalInterval ex = enclose(x, bits);
    RationalInterval ey = enclose(y, bits);
    if (ex.hi < ey.lo) return -1;
    if (ey.hi < ex.lo) return 1;
  }
  return 0;
}

}  // namespace skelrot
