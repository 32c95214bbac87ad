#pragma once

#include <vector>

#include "skelrot/planar.hpp"
#include "skelrot/rational.hpp"

namespace skelrot {

// Rational stand-in p/q for an irrational rho in (0,1) given by a prefix of
// its continued fraction [0; a1, a2, ...].  Ceilings of m*rho are certified
// for 1 <= m <= max_safe_index.
struct IrrationalParam {
  std::vector<long> cf_coeffs;
  int depth = 0;
  Integer convergent_num;
  Integer convergent_den;
  Rational error_bound;
  long max_safe_index = 0;

  Rational value() const { return Rational(convergent_num, convergent_den); }
  double approx() const { return value().get_d(); }
};

struct AlphaValue {
  Rational value;
  long index = 0;
};

IrrationalParam build_param(const std::vector<long>& cf_coeffs, int depth);

// ceil(n*rho), certified.
Integer ceil_multiple(const IrrationalParam& param, long n);
AlphaValue alpha(const IrrationalParam& param, long n);
PlanarRational rho_vec(const IrrationalParam& param, long m, long n);

// alpha_m < rho, decided with the certification margin.
bool alpha_below_rho(const IrrationalParam& param, long m);
bool is_admissible(const IrrationalParam& param, long m, long n);

// Admissible single indices 1..limit in increasing order.
std::vector<long> admissible_indices(const IrrationalParam& param, long limit);

}  // namespace skelrot
