#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <type_traits>
#include <utility>
#include <vector>

#include "skelrot/algebraic.hpp"
#include "skelrot/errors.hpp"
#include "skelrot/numeric.hpp"
#include "skelrot/rational.hpp"

namespace skelrot {

// Value a2*x^2 + a1*x + a0 of the lift on one breakpoint interval.
struct Piece {
  Rational a2;
  Rational a1;
  Rational a0;

  bool affine() const { return a2 == 0; }
  bool constant() const { return a2 == 0 && a1 == 0; }
  Rational at(const Rational& x) const { return (a2 * x + a1) * x + a0; }
  Rational slope_at(const Rational& x) const { return 2 * a2 * x + a1; }
  friend bool operator==(const Piece& a, const Piece& b) {
    return a.a2 == b.a2 && a.a1 == b.a1 && a.a0 == b.a0;
  }
};

// Closed arc given by a lift [lo, hi] with 0 <= hi - lo < 1.
struct Arc {
  Rational lo;
  Rational hi;

  Rational length() const { return hi - lo; }
  Arc shifted(const Rational& t) const { return {lo + t, hi + t}; }
};

// Closed arcs on the circle intersect.
bool arcs_intersect(const Arc& a, const Arc& b);
// x (mod 1) lies in the closed arc.
bool arc_contains(const Arc& a, const Rational& x);

// Degree-one monotone circle map stored as the lift on [0,1) and extended
// by lift(x+1) = lift(x)+1.
class PiecewiseCircleMap {
 public:
  PiecewiseCircleMap() = default;
  // breakpoints[0] == 0, strictly increasing, all < 1; one piece per
  // breakpoint.  Throws ValidationError unless the lift is continuous,
  // degree one and nondecreasing.
  PiecewiseCircleMap(std::vector<Rational> breakpoints, std::vector<Piece> pieces);

  // Pieces given on [origin, origin+1) for some origin in (-1, 0].
  static PiecewiseCircleMap from_lifted(const Rational& origin,
                                        std::vector<std::pair<Rational, Piece>> pieces);
  static PiecewiseCircleMap rotation(const Rational& t);
  static PiecewiseCircleMap identity() { return rotation(Rational(0)); }

  template <Scalar T>
  T lift(const T& x) const;
  Rational lift(const Rational& x) const { return lift<Rational>(x); }
  Rational apply(const Rational& x) const;

  const std::vector<Rational>& breakpoints() const { return bp_; }
  const std::vector<Piece>& pieces() const { return pc_; }
  std::size_t size() const { return bp_.size(); }
  Rational interval_end(std::size_t i) const { return i + 1 < bp_.size() ? bp_[i + 1] : Rational(1); }
  std::int64_t lift_offset() const { return floor_int(pc_[0].a0); }

  // Maximal intervals where the lift is constant, merged across the wrap.
  std::vector<Arc> plateaus() const;
  bool strictly_increasing() const;
  bool all_affine() const;
  // Largest slope; the Lipschitz constant of an affine map.
  Rational max_slope() const;

  template <Scalar T>
  std::size_t locate(const T& y) const;

 private:
  void validate() const;
  void cache();

  std::vector<Rational> bp_;
  std::vector<Piece> pc_;
  std::vector<double> bp_d_;
  std::vector<std::array<double, 3>> pc_d_;
};

// outer o inner; both must be affine on every piece.
PiecewiseCircleMap compose(const PiecewiseCircleMap& outer, const PiecewiseCircleMap& inner);
// Inverse lift of a strictly increasing affine map.
PiecewiseCircleMap inverse(const PiecewiseCircleMap& f);
bool equal_maps(const PiecewiseCircleMap& a, const PiecewiseCircleMap& b);

// Quadratic fold of the arc [-w, w] onto [0, tau]: tau*(1 - (u/w)^2).
struct Fold {
  Rational tau;
  Rational halfwidth;
  Rational coef;  // tau / w^2

  Fold() = default;
  Fold(Rational t, Rational w);
  template <Scalar T>
  T eval(const T& u) const {
    using S = ScalarTraits<T>;
    return S::from(tau) - S::from(coef) * u * u;
  }
  Rational eval(const Rational& u) const { return eval<Rational>(u); }
};

struct DenjoyConfig {
  Rational gap_mass{1, 2};
  Rational i_halfwidth_fraction{17, 18};
  Rational wandering_length{1, 50};
  long gap_budget = 40;
  int dyadic_bits = 60;
  long max_period = 2'000'000;
};

// Blow-up of the whole periodic orbit of rotation by p/q: one gap per
// orbit point, listed in circle order k = 0..q-1 with gap k sitting at
// angle k/q.  Gap label n (the n-th image of the wandering gap) sits at
// k = n*p mod q; labels are taken in (-q/2, q/2].
struct GapTable {
  long p = 0;
  long q = 0;
  long p_inverse = 0;
  Rational complement_length;  // (1-L)/q, one arc between consecutive gaps
  std::vector<Rational> start;  // start[0] = -(wandering half-width)
  std::vector<Rational> length;
  std::vector<double> start_d;
  std::vector<double> length_d;

  long label_of(long k) const;
  long position_of(long label) const;
  Arc gap(long k) const { return {start[k], start[k] + length[k]}; }
};

struct DenjoyModel {
  IrrationalParam param;
  DenjoyConfig config;
  GapTable table;
  PiecewiseCircleMap denjoy;  // the unmodified blow-up homeomorphism
  PiecewiseCircleMap phi;
  PiecewiseCircleMap p;
  PiecewiseCircleMap psi;
  PiecewiseCircleMap h;
  Fold fold;
  Rational halfwidth;             // of I
  Rational wandering_halfwidth;   // of gap_0
  Rational tau;
  Arc wandering_image;            // phi(gap_0) = gap_1
  std::map<long, Arc> gap_index;  // labels -K..K
  Rational cantor_measure_scale;  // 1/(1-L)
  Rational semiconj_sup;          // B = sup |h~ - id|
  double halfwidth_d = 0;
  double tau_d = 0;

  long gap_budget() const { return config.gap_budget; }
  Arc I() const { return {-halfwidth, halfwidth}; }
  Arc wandering_arc() const { return {-wandering_halfwidth, wandering_halfwidth}; }
};

DenjoyModel build_denjoy(const IrrationalParam& param, const DenjoyConfig& config = {});

// Lift of h with h~(0) = 0.  With check_window, points inside a gap whose
// label exceeds the gap budget raise WindowError.
template <Scalar T>
T semiconj_lift(const DenjoyModel& model, const T& x, bool check_window = true);
inline Rational semiconj_lift(const DenjoyModel& model, const Rational& x, bool check_window = true) {
  return semiconj_lift<Rational>(model, x, check_window);
}
Rational semiconj_h(const DenjoyModel& model, const Rational& x);

RationalInterval rotation_number_estimate(const PiecewiseCircleMap& map, const Rational& x0,
                                          long n_iters);

// First k in 1..horizon with map^k(arc) meeting arc.
std::optional<long> first_return(const PiecewiseCircleMap& map, const Arc& arc, long horizon);
bool wandering_check(const DenjoyModel& model, long horizon);

// ---------------------------------------------------------------------------

template <Scalar T>
std::size_t PiecewiseCircleMap::locate(const T& y) const {
  if constexpr (std::is_same_v<T, double>) {
    auto it = std::upper_bound(bp_d_.begin(), bp_d_.end(), y);
    return it == bp_d_.begin() ? 0 : static_cast<std::size_t>(it - bp_d_.begin()) - 1;
  } else if constexpr (std::is_same_v<T, Rational>) {
    auto it = std::upper_bound(bp_.begin(), bp_.end(), y);
    return it == bp_.begin() ? 0 : static_cast<std::size_t>(it - bp_.begin()) - 1;
  } else {
    using S = ScalarTraits<T>;
    auto ok = [&](std::size_t i) {
      if (sign(y - S::from(bp_[i])) < 0) return false;
      return i + 1 == bp_.size() || sign(y - S::from(bp_[i + 1])) < 0;
    };
    std::size_t guess = locate(to_double(y));
    if (ok(guess)) return guess;
    std::size_t lo = 0, hi = bp_.size();
    while (hi - lo > 1) {
      std::size_t mid = (lo + hi) / 2;
      if (sign(y - S::from(bp_[mid])) >= 0) lo = mid;
      else hi = mid;
    }
    return lo;
  }
}

template <Scalar T>
T PiecewiseCircleMap::lift(const T& x) const {
  using S = ScalarTraits<T>;
  std::int64_t k = floor_int(x);
  if constexpr (std::is_same_v<T, double>) {
    double y = x - static_cast<double>(k);
    const auto& c = pc_d_[locate(y)];
    return (c[0] * y + c[1]) * y + c[2] + static_cast<double>(k);
  } else {
    T y = x - S::from_int(k);
    const Piece& pc = pc_[locate(y)];
    T v = S::from(pc.a1) * y + S::from(pc.a0 + Rational(static_cast<long>(k)));
    if (pc.a2 != 0) v = v + S::from(pc.a2) * y * y;
    return v;
  }
}

template <Scalar T>
T semiconj_lift(const DenjoyModel& model, const T& x, bool check_window) {
  using S = ScalarTraits<T>;
  const GapTable& g = model.table;
  std::int64_t k0 = floor_int(x);
  T y = x - S::from_int(k0);  // in [0,1)
  // The right half of gap 0 wraps around; its angle lifts to 1.
  if (!(y < S::from(Rational(1) - model.wandering_halfwidth))) {
    return S::from_int(k0 + 1);
  }
  std::size_t k;
  T end;
  if constexpr (std::is_same_v<T, double>) {
    auto it = std::upper_bound(g.start_d.begin(), g.start_d.end(), y);
    k = static_cast<std::size_t>(it - g.start_d.begin()) - 1;
    end = g.start_d[k] + g.length_d[k];
  } else {
    auto it = std::upper_bound(g.start.begin(), g.start.end(), y);
    k = static_cast<std::size_t>(it - g.start.begin()) - 1;
    end = S::from(g.start[k] + g.length[k]);
  }
  Rational angle(static_cast<long>(k), g.q);
  angle.canonicalize();
  angle += static_cast<long>(k0);
  if (!(end < y)) {
    if (check_window) {
      long label = g.label_of(static_cast<long>(k));
      if (label < -model.gap_budget() || label > model.gap_budget()) {
        throw WindowError("point lies in untracked gap " + std::to_string(label));
      }
    }
    return S::from(angle);
  }
  return S::from(angle) + (y - end) * S::from(model.cantor_measure_scale);
}

}  // namespace skelrot
