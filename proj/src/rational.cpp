#include "skelrot/rational.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>

#include "skelrot/errors.hpp"

namespace skelrot {

RationalInterval operator+(const RationalInterval& a, const RationalInterval& b) {
  return {a.lo + b.lo, a.hi + b.hi};
}

RationalInterval operator-(const RationalInterval& a, const RationalInterval& b) {
  return {a.lo - b.hi, a.hi - b.lo};
}

RationalInterval operator*(const RationalInterval& a, const RationalInterval& b) {
  Rational c[4] = {a.lo * b.lo, a.lo * b.hi, a.hi * b.lo, a.hi * b.hi};
  return {*std::min_element(c, c + 4), *std::max_element(c, c + 4)};
}

Rational make_rational(long num, long den) {
  Rational r(num, den);
  r.canonicalize();
  return r;
}

Integer floor_z(const Rational& x) {
  Integer f;
  mpz_fdiv_q(f.get_mpz_t(), x.get_num_mpz_t(), x.get_den_mpz_t());
  return f;
}

Integer ceil_z(const Rational& x) {
  Integer c;
  mpz_cdiv_q(c.get_mpz_t(), x.get_num_mpz_t(), x.get_den_mpz_t());
  return c;
}

std::int64_t floor_int(const Rational& x) {
  Integer f = floor_z(x);
  if (!f.fits_slong_p()) throw ValidationError("integer part does not fit in 64 bits");
  return f.get_si();
}

std::int64_t floor_int(double x) { return static_cast<std::int64_t>(std::floor(x)); }

Rational from_double(double x) {
  if (!std::isfinite(x)) throw ValidationError("non-finite value");
  Rational r(x);  // mpq_set_d is exact
  return r;
}

Rational parse_rational(const std::string& text) {
  Rational r;
  if (text.empty() || r.set_str(text, 10) != 0) {
    throw ValidationError("malformed rational: '" + text + "'");
  }
  if (r.get_den() == 0) throw ValidationError("zero denominator: '" + text + "'");
  r.canonicalize();
  return r;
}

std::string to_string(const Rational& x) { return x.get_str(); }

std::string to_decimal(double x) {
  char buf[64];
  for (int prec = 15; prec <= 17; ++prec) {
    std::snprintf(buf, sizeof buf, "%.*g", prec, x);
    if (std::strtod(buf, nullptr) == x) break;
  }
  return buf;
}

std::string to_decimal(const Rational& x) { return to_decimal(x.get_d()); }

Rational round_dyadic(double x, int bits) {
  double scaled = std::ldexp(x, bits);
  Rational r(Integer(static_cast<long>(std::llround(scaled))), 1);
  Integer den = 1;
  den <<= bits;
  r /= den;
  return r;
}

RationalInterval sqrt_bounds(const Rational& x, int bits) {
  if (x < 0) throw ValidationError("square root of a negative number");
  Integer scale = 1;
  scale <<= 2 * bits;
  Integer lo_arg = floor_z(x * scale);
  Integer hi_arg = ceil_z(x * scale);
  Integer lo, hi;
  mpz_sqrt(lo.get_mpz_t(), lo_arg.get_mpz_t());
  mpz_sqrt(hi.get_mpz_t(), hi_arg.get_mpz_t());
  if (hi * hi < hi_arg) hi += 1;
  Integer den = 1;
  den <<= bits;
  RationalInterval out{Rational(lo, den), Rational(hi, den)};
  out.lo.canonicalize();
  out.hi.canonicalize();
  return out;
}

std::optional<Rational> exact_sqrt(const Rational& x) {
  if (x < 0) return std::nullopt;
  if (!mpz_perfect_square_p(x.get_num_mpz_t()) || !mpz_perfect_square_p(x.get_den_mpz_t())) {
    return std::nullopt;
  }
  Integer n, d;
  mpz_sqrt(n.get_mpz_t(), x.get_num_mpz_t());
  mpz_sqrt(d.get_mpz_t(), x.get_den_mpz_t());
  return Rational(n, d);
}

std::size_t bit_size(const Rational& x) {
  return mpz_sizeinbase(x.get_num_mpz_t(), 2) + mpz_sizeinbase(x.get_den_mpz_t(), 2);
}

}  // namespace skelrot
