#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <optional>
#include <string>
#include <utility>

namespace skelrot {

using Integer = mpz_class;
using Rational = mpq_class;

// Closed interval with rational endpoints, lo <= hi.
struct RationalInterval {
  Rational lo;
  Rational hi;

  bool contains(const Rational& x) const { return lo <= x && x <= hi; }
  Rational width() const { return hi - lo; }
};

RationalInterval operator+(const RationalInterval& a, const RationalInterval& b);
RationalInterval operator-(const RationalInterval& a, const RationalInterval& b);
RationalInterval operator*(const RationalInterval& a, const RationalInterval& b);

Rational make_rational(long num, long den = 1);
Integer floor_z(const Rational& x);
Integer ceil_z(const Rational& x);
std::int64_t floor_int(const Rational& x);
std::int64_t floor_int(double x);

inline int sign(const Rational& x) { return sgn(x); }
inline int sign(double x) { return (x > 0) - (x < 0); }
inline double to_double(const Rational& x) { return x.get_d(); }
inline double to_double(double x) { return x; }

// Exact value of a finite double.
Rational from_double(double x);

// "p/q" or "p"; throws ValidationError on malformed input or zero denominator.
Rational parse_rational(const std::string& text);
std::string to_string(const Rational& x);
// Shortest round-trip decimal rendering of the nearest double.
std::string to_decimal(const Rational& x);
std::string to_decimal(double x);

// Nearest dyadic k/2^bits to x (ties away from zero).
Rational round_dyadic(double x, int bits);

// floor(sqrt(x)*2^bits)/2^bits and the matching ceiling; x >= 0.
RationalInterval sqrt_bounds(const Rational& x, int bits);
// sqrt(x) when x is the square of a rational.
std::optional<Rational> exact_sqrt(const Rational& x);

// Number of bits in numerator plus denominator; a size measure for
// guarding exact iteration.
std::size_t bit_size(const Rational& x);

// Uniform conversion used by the scalar-generic dynamics code.
template <class T>
struct ScalarTraits;

template <>
struct ScalarTraits<Rational> {
  static Rational from(const Rational& r) { return r; }
  static Rational from_int(std::int64_t k) { return Rational(static_cast<long>(k)); }
};

template <>
struct ScalarTraits<double> {
  static double from(const Rational& r) { return r.get_d(); }
  static double from_int(std::int64_t k) { return static_cast<double>(k); }
};

// Types the dynamics templates accept.  GMP expression templates are not
// scalars; they convert to Rational through the plain overloads instead.
template <class T>
concept Scalar = requires(std::int64_t k) { ScalarTraits<T>::from_int(k); };

}  // namespace skelrot
