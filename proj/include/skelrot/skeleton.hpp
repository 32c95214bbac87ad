#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <type_traits>
#include <utility>
#include <vector>

#include "skelrot/algebraic.hpp"
#include "skelrot/circlemap.hpp"
#include "skelrot/errors.hpp"
#include "skelrot/planar.hpp"

namespace skelrot {

enum class Axis { h, v };

inline Axis other(Axis a) { return a == Axis::h ? Axis::v : Axis::h; }
inline const char* axis_name(Axis a) { return a == Axis::h ? "h" : "v"; }

// Point of the bouquet S^(h) u S^(v).  The wedge point is stored once, as
// axis h with coord 0.
struct SkeletonPoint {
  Axis axis = Axis::h;
  Rational coord;

  friend bool operator==(const SkeletonPoint& a, const SkeletonPoint& b) {
    return a.axis == b.axis && a.coord == b.coord;
  }
};

SkeletonPoint make_point(Axis axis, const Rational& coord);
inline SkeletonPoint origin() { return {Axis::h, Rational(0)}; }

// Lift of a bouquet point to the grid of lattice lines in R^2: the point
// (cell_x + coord, cell_y) on a horizontal line or (cell_x, cell_y + coord)
// on a vertical one, coord in [0,1).
template <class T>
struct LiftedPoint {
  Axis axis = Axis::h;
  std::int64_t cell_x = 0;
  std::int64_t cell_y = 0;
  T coord{};

  std::int64_t& along(Axis a) { return a == Axis::h ? cell_x : cell_y; }
  LiftedPoint translated(std::int64_t dx, std::int64_t dy) const {
    LiftedPoint out = *this;
    out.cell_x += dx;
    out.cell_y += dy;
    return out;
  }
};

using LiftedSkeletonPoint = LiftedPoint<Rational>;

LiftedSkeletonPoint lift_point(const SkeletonPoint& pt);
inline SkeletonPoint base(const LiftedSkeletonPoint& pt) { return {pt.axis, pt.coord}; }
PlanarRational position(const LiftedSkeletonPoint& pt);
std::array<double, 2> position(const LiftedPoint<double>& pt);

enum class StepKind { circle, fold, collapse };

namespace detail {

template <class T>
bool lt(const T& a, const T& b) {
  if constexpr (std::is_same_v<T, double> || std::is_same_v<T, Rational>) return a < b;
  else return sign(a - b) < 0;
}

template <class T>
bool is_zero(const T& a) {
  if constexpr (std::is_same_v<T, double>) return a == 0.0;
  else return sign(a) == 0;
}

template <class T>
struct Constants {
  T w, neg_w, half, one;
  explicit Constants(const DenjoyModel& m) {
    using S = ScalarTraits<T>;
    if constexpr (std::is_same_v<T, double>) {
      w = m.halfwidth_d;
    } else {
      w = S::from(m.halfwidth);
    }
    neg_w = S::from(Rational(0)) - w;
    half = S::from(Rational(1, 2));
    one = S::from(Rational(1));
  }
};

}  // namespace detail

// F^(sigma) on a lifted point.
template <class T>
LiftedPoint<T> half_step(const DenjoyModel& m, Axis sigma, const LiftedPoint<T>& pt,
                         StepKind* kind = nullptr) {
  using S = ScalarTraits<T>;
  const detail::Constants<T> c(m);
  LiftedPoint<T> out = pt;
  StepKind k;
  if (pt.axis == sigma) {
    T x = m.psi.lift(pt.coord);
    std::int64_t f = floor_int(x);
    out.coord = x - S::from_int(f);
    out.along(sigma) += f;
    k = StepKind::circle;
  } else {
    // Center the coordinate in [-1/2, 1/2) around the nearest lattice point.
    T u = pt.coord;
    if (!detail::lt(u, c.half)) {
      u = u - c.one;
      out.along(pt.axis) += 1;
    }
    if (!detail::lt(u, c.neg_w) && !detail::lt(c.w, u)) {
      out.axis = sigma;
      out.coord = m.fold.eval(u);
      k = StepKind::fold;
    } else {
      T y = m.p.lift(u);
      std::int64_t f = floor_int(y);
      out.coord = y - S::from_int(f);
      out.along(pt.axis) += f;
      k = StepKind::collapse;
    }
  }
  if (detail::is_zero(out.coord)) out.axis = Axis::h;
  if (kind) *kind = k;
  return out;
}

// F = F^(v) o F^(h).
template <class T>
LiftedPoint<T> full_step(const DenjoyModel& m, const LiftedPoint<T>& pt) {
  return half_step(m, Axis::v, half_step(m, Axis::h, pt));
}

SkeletonPoint f_sigma(const DenjoyModel& m, Axis sigma, const SkeletonPoint& pt);
SkeletonPoint f_apply(const DenjoyModel& m, const SkeletonPoint& pt);
LiftedSkeletonPoint lifted_step(const DenjoyModel& m, const LiftedSkeletonPoint& pt);

// Transported position H~(x) in R^2.
template <class T>
std::array<T, 2> h_position(const DenjoyModel& m, const LiftedPoint<T>& pt, bool check_window = true) {
  using S = ScalarTraits<T>;
  T c = semiconj_lift(m, pt.coord, check_window);
  if (pt.axis == Axis::h) return {S::from_int(pt.cell_x) + c, S::from_int(pt.cell_y)};
  return {S::from_int(pt.cell_x), S::from_int(pt.cell_y) + c};
}

SkeletonPoint h_transport(const DenjoyModel& m, const SkeletonPoint& pt);

// ---------------------------------------------------------------------------
// Orbit classification

struct OrbitClassification {
  enum class Kind { free_h, free_v, interacting };
  Kind kind = Kind::free_h;
  std::vector<std::pair<long, long>> segments;
  long horizon_used = 0;
  // Integer times at which the orbit sits in I^(v) and is folded onto S^(h).
  std::vector<long> vertical_visits;
};

const char* kind_name(OrbitClassification::Kind k);

// Tracks folds of an orbit and turns them into diagram segments.
class FoldTracker {
 public:
  // Called once per half-step with the time (in half units) at which the
  // half-step started.
  void record(long half_time, Axis sigma, StepKind kind);
  OrbitClassification finish(Axis final_axis, long horizon) const;

 private:
  std::vector<std::pair<long, Axis>> folds_;  // (half_time, axis folded onto)
};

template <class T>
OrbitClassification classify_lifted(const DenjoyModel& m, LiftedPoint<T> pt, long horizon) {
  FoldTracker tracker;
  for (long t = 0; t < horizon; ++t) {
    StepKind k;
    pt = half_step(m, Axis::h, pt, &k);
    tracker.record(2 * t, Axis::h, k);
    pt = half_step(m, Axis::v, pt, &k);
    tracker.record(2 * t + 1, Axis::v, k);
  }
  return tracker.finish(pt.axis, horizon);
}

// Exact classification; horizon at most K-1.  Iteration is aborted with a
// ValidationError once coordinates exceed max_bits (folds square sizes).
OrbitClassification classify_orbit(const DenjoyModel& m, const SkeletonPoint& pt, long horizon,
                                   std::size_t max_bits = 1u << 22);

// ---------------------------------------------------------------------------
// Markov arcs

struct MarkovArc {
  Quad2 lo;
  Quad2 hi;
  long m = 0;
  long n = 0;
  int branch = 0;  // 1..4, left to right in I^(v)

  RationalInterval enclosure(int bits = 128) const;
  // Rational points strictly inside the arc.
  RationalInterval inner(int bits = 128) const;
};

// phi^{-k}(I), lifted so that lo lies in [-1/2, 1/2).
Arc preimage_of_I(const DenjoyModel& m, long k);
std::vector<MarkovArc> markov_arcs(const DenjoyModel& m, long m_steps, long n_steps);

// Centered end coordinate after m+n+1 exact steps from the vertical point
// u in I^(v), together with the lifted orbit.
struct BranchOrbit {
  Rational end;
  std::vector<LiftedSkeletonPoint> half_points;  // x_0, x_1/2, ..., x_{m+n+1}
};
BranchOrbit branch_orbit(const DenjoyModel& m, const Rational& u, long period);

struct MarkovFixedPoint {
  SkeletonPoint point;
  Rational u;         // centered coordinate in I^(v)
  Rational residual;  // end - u after one period
  std::array<Integer, 2> integer_displacement;
  long iterations = 0;
};

MarkovFixedPoint markov_fixed_point(const DenjoyModel& m, long m_steps, long n_steps,
                                    const Rational& tol = Rational(1, 1000000000000L));
SkeletonPoint fixed_point_in_K(const DenjoyModel& m, long m_steps, long n_steps,
                               const Rational& tol = Rational(1, 1000000000000L));

PlanarRational rotation_vector_exact(const DenjoyModel& m, long m_steps, long n_steps);

// Arcs K, B^{-1}(K), B^{-2}(K), ... for the first branch, each given by an
// outer rational enclosure.
std::vector<RationalInterval> markov_nesting(const DenjoyModel& m, long m_steps, long n_steps,
                                             int levels = 5, int bits = 256);

}  // namespace skelrot
