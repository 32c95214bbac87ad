#pragma once

// Independent high-precision reference values, computed in decimal floating
// point without touching the library's rational machinery.

#include <boost/multiprecision/cpp_dec_float.hpp>

namespace oracle {

using Dec = boost::multiprecision::cpp_dec_float_50;

inline Dec golden() { return (boost::multiprecision::sqrt(Dec(5)) - 1) / 2; }
inline Dec silver() { return boost::multiprecision::sqrt(Dec(2)) - 1; }

inline Dec alpha(const Dec& rho, long n) {
  Dec x = rho * n;
  return boost::multiprecision::ceil(x) - x;
}

inline bool admissible(const Dec& rho, long m, long n) { return alpha(rho, m) < rho && alpha(rho, n) < rho; }

// [0; a1, ..., ad] evaluated from the bottom up.
inline std::pair<long, long> convergent(const std::vector<long>& cf, int depth) {
  long num = 0, den = 1;  // value num/den of the tail
  for (int k = depth - 1; k >= 0; --k) {
    // tail <- 1 / (a_k + tail)
    long nn = den;
    long nd = cf[k] * den + num;
    num = nn;
    den = nd;
  }
  return {num, den};
}

}  // namespace oracle
