#include "skelrot/numeric.hpp"

#include <algorithm>
#include <string>

#include "skelrot/errors.hpp"

namespace skelrot {

namespace {

constexpr long kScanLimit = 10'000'000;

void check_index(const IrrationalParam& param, long n) {
  if (n < 1 || n > param.max_safe_index) {
    throw CertificationError("index " + std::to_string(n) + " outside certified range 1.." +
                             std::to_string(param.max_safe_index));
  }
}

}  // namespace

IrrationalParam build_param(const std::vector<long>& cf_coeffs, int depth) {
  if (depth < 1 || static_cast<std::size_t>(depth) > cf_coeffs.size()) {
    throw ValidationError("depth " + std::to_string(depth) + " exceeds the " +
                          std::to_string(cf_coeffs.size()) + " available coefficients");
  }
  for (long a : cf_coeffs) {
    if (a < 1) throw ValidationError("continued-fraction coefficients must be positive");
  }

  Integer p_prev = 1, p = 0, q_prev = 0, q = 1;
  for (int k = 0; k < depth; ++k) {
    Integer pn = cf_coeffs[k] * p + p_prev;
    Integer qn = cf_coeffs[k] * q + q_prev;
    p_prev = p;
    q_prev = q;
    p = pn;
    q = qn;
  }
  if (p <= 0 || p >= q) {
    throw ValidationError("convergent " + p.get_str() + "/" + q.get_str() + " is not in (0,1)");
  }
  if (depth < 2) throw ValidationError("depth must be at least 2");

  // An absent next coefficient is taken as 1, the smallest possible value,
  // which only weakens the bound.
  long next = static_cast<std::size_t>(depth) < cf_coeffs.size() ? cf_coeffs[depth] : 1;
  Integer q_next = next * q + q_prev;

  IrrationalParam out;
  out.cf_coeffs = cf_coeffs;
  out.depth = depth;
  out.convergent_num = p;
  out.convergent_den = q;
  out.error_bound = Rational(1, q * q_next);
  out.error_bound.canonicalize();

  long limit = q.fits_slong_p() ? std::min<long>(q.get_si() - 1, kScanLimit) : kScanLimit;
  long m = 1;
  for (; m <= limit; ++m) {
    Integer r = (p * m) % q;
    Integer d = std::min<Integer>(r, q - r);
    Rational dist(d, q);
    dist.canonicalize();
    if (dist <= m * out.error_bound) break;
  }
  out.max_safe_index = m - 1;
  return out;
}

Integer ceil_multiple(const IrrationalParam& param, long n) {
  check_index(param, n);
  Rational x(param.convergent_num * n, param.convergent_den);
  x.canonicalize();
  return ceil_z(x);
}

AlphaValue alpha(const IrrationalParam& param, long n) {
  Integer c = ceil_multiple(param, n);
  Rational v = c - n * param.value();
  return {v, n};
}

PlanarRational rho_vec(const IrrationalParam& param, long m, long n) {
  Integer cm = ceil_multiple(param, m);
  Integer cn = ceil_multiple(param, n);
  Rational s(m + n + 1);
  return {Rational(cm) / s, Rational(cn) / s};
}

bool alpha_below_rho(const IrrationalParam& param, long m) {
  Rational a = alpha(param, m).value;
  Rational gap = a - param.value();
  if (abs(gap) <= (m + 1) * param.error_bound) {
    throw CertificationError("comparison alpha_" + std::to_string(m) +
                             " < rho is within the certification margin");
  }
  return gap < 0;
}

bool is_admissible(const IrrationalParam& param, long m, long n) {
  bool am = alpha_below_rho(param, m);
  bool an = alpha_below_rho(param, n);
  return am && an;
}

std::vector<long> admissible_indices(const IrrationalParam& param, long limit) {
  std::vector<long> out;
  for (long m = 1; m <= limit; ++m) {
    if (alpha_below_rho(param, m)) out.push_back(m);
  }
  return out;
}

}  // namespace skelrot
