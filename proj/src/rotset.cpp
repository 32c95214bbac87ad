#include "skelrot/rotset.hpp"

#include <cmath>
#include <random>
#include <sstream>

#include "skelrot/errors.hpp"

namespace skelrot {

namespace {

Rational convergent(const DenjoyModel& m) { return m.param.value(); }

template <class T>
PlanarRational exact_position(const LiftedPoint<T>& pt) {
  Rational c;
  if constexpr (std::is_same_v<T, double>) c = from_double(pt.coord);
  else c = pt.coord;
  Rational cx(static_cast<long>(pt.cell_x)), cy(static_cast<long>(pt.cell_y));
  if (pt.axis == Axis::h) return {cx + c, cy};
  return {cx, cy + c};
}

}  // namespace

SkeletonPoint free_start(const DenjoyModel& m, Axis axis, const Rational& theta) {
  const GapTable& g = m.table;
  Rational t = theta - floor_z(theta);
  Rational scaled = t * g.q;
  std::int64_t k = floor_int(scaled);
  Rational x = g.start[k] + g.length[k] + (scaled - Rational(static_cast<long>(k))) * g.complement_length;
  x -= floor_z(x);
  if (axis == Axis::h) x = m.p.apply(x);
  return make_point(axis, x);
}

PlanarRational free_orbit_certificate(const DenjoyModel& m, Axis axis, long steps) {
  if (steps < 1) throw ValidationError("certificate needs at least one step");
  Rational rho = convergent(m);
  Rational theta(1, 3);
  LiftedSkeletonPoint pt = lift_point(free_start(m, axis, theta));
  if (pt.axis != axis) throw ConsistencyError("free start fell on the wedge point");
  // On S^(v) the map phi acts at integer times, on S^(h) at half-integer times.
  std::optional<std::array<Rational, 2>> prev;
  for (long t = 0; t <= steps; ++t) {
    LiftedSkeletonPoint half = half_step(m, Axis::h, pt);
    const LiftedSkeletonPoint& probe = axis == Axis::v ? pt : half;
    if (probe.axis != axis) throw ConsistencyError("free orbit left its circle");
    std::array<Rational, 2> cur = h_position(m, probe);
    if (prev) {
      Rational along = axis == Axis::h ? cur[0] - (*prev)[0] : cur[1] - (*prev)[1];
      Rational across = axis == Axis::h ? cur[1] - (*prev)[1] : cur[0] - (*prev)[0];
      if (along != rho || across != 0) throw ConsistencyError("H does not advance by p/q on a free orbit");
    }
    prev = cur;
    pt = half_step(m, Axis::v, half);
  }
  return axis == Axis::h ? PlanarRational{rho, Rational(0)} : PlanarRational{Rational(0), rho};
}

std::vector<PlanarRational> certified_cloud(const DenjoyModel& m, long N) {
  if (N < 1 || N > m.gap_budget() - 1) {
    throw WindowError("truncation " + std::to_string(N) + " outside the gap window 1.." +
                      std::to_string(m.gap_budget() - 1));
  }
  std::vector<PlanarRational> out;
  for (long a = 1; a <= N; ++a) {
    for (long b = 1; b <= N; ++b) {
      if (is_admissible(m.param, a, b)) out.push_back(rotation_vector_exact(m, a, b));
    }
  }
  long steps = m.gap_budget() - 1;
  out.push_back(free_orbit_certificate(m, Axis::h, steps));
  out.push_back(free_orbit_certificate(m, Axis::v, steps));
  return out;
}

std::vector<SkeletonPoint> sample_starts(const DenjoyModel& m, const SampleSpec& spec) {
  if (spec.count < 0) throw ValidationError("sample count must be nonnegative");
  std::vector<SkeletonPoint> out;
  std::size_t count = static_cast<std::size_t>(spec.count);
  if (spec.include_markov) {
    for (long a = 1; a <= spec.markov_limit && out.size() < count; ++a) {
      for (long b = 1; b <= spec.markov_limit && out.size() < count; ++b) {
        if (is_admissible(m.param, a, b)) out.push_back(fixed_point_in_K(m, a, b));
      }
    }
  }
  // Additive golden-ratio recurrence from a seeded offset, alternating axes.
  std::mt19937_64 rng(spec.seed);
  double offset = static_cast<double>(rng() >> 11) * 0x1.0p-53;
  const double step = 0.6180339887498949;
  for (long t = 0; out.size() < count; ++t) {
    double u = offset + static_cast<double>(t / 2) * step;
    u -= std::floor(u);
    out.push_back(make_point(t % 2 == 0 ? Axis::h : Axis::v, from_double(u)));
  }
  return out;
}

RotationSample sample_orbit(const DenjoyModel& m, const SkeletonPoint& start, long horizon, Precision precision) {
  if (horizon < 1) throw ValidationError("horizon must be positive");
  RotationSample s;
  s.start = lift_point(start);
  s.steps = horizon;
  PlanarRational p0 = position(s.start);
  PlanarRational p1;
  if (precision == Precision::exact) {
    if (horizon > m.gap_budget() - 1) {
      throw WindowError("exact orbits are limited to the gap window " + std::to_string(m.gap_budget() - 1));
    }
    s.classification = classify_orbit(m, start, horizon);
    LiftedSkeletonPoint pt = s.start;
    for (long t = 0; t < horizon; ++t) pt = lifted_step(m, pt);
    p1 = position(pt);
  } else {
    LiftedPoint<double> pt{s.start.axis, s.start.cell_x, s.start.cell_y, s.start.coord.get_d()};
    FoldTracker tracker;
    for (long t = 0; t < horizon; ++t) {
      StepKind k;
      pt = half_step(m, Axis::h, pt, &k);
      tracker.record(2 * t, Axis::h, k);
      pt = half_step(m, Axis::v, pt, &k);
      tracker.record(2 * t + 1, Axis::v, k);
    }
    s.classification = tracker.finish(pt.axis, horizon);
    p1 = exact_position(pt);
  }
  Rational n(horizon);
  s.avg_displacement = {(p1.x - p0.x) / n, (p1.y - p0.y) / n};
  return s;
}

std::vector<RotationSample> empirical_cloud(const DenjoyModel& m, const std::vector<SkeletonPoint>& starts,
                                            long horizon, Precision precision) {
  std::vector<RotationSample> out;
  out.reserve(starts.size());
  for (const auto& s : starts) out.push_back(sample_orbit(m, s, horizon, precision));
  return out;
}

ComparisonReport compare_to_analytic(const DenjoyModel& m, long N, const std::vector<RotationSample>& samples,
                                     long horizon) {
  return compare_to_analytic(m, N, samples, horizon, certified_cloud(m, N));
}

ComparisonReport compare_to_analytic(const DenjoyModel& m, long N, const std::vector<RotationSample>& samples,
                                     long horizon, const std::vector<PlanarRational>& certified) {
  if (horizon < 1) throw ValidationError("horizon must be positive");
  ComparisonReport r;
  r.N = N;
  r.horizon = horizon;
  r.analytic = omega_set(m.param, N, true);
  r.slack = 2 * m.semiconj_sup / horizon;
  Rational slack_sq = r.slack * r.slack;

  std::vector<PlanarRational> pts = certified;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const PlanarRational& avg = samples[i].avg_displacement;
    pts.push_back(avg);
    Rational d2 = squared_distance(avg, r.analytic);
    double ratio = std::sqrt(d2.get_d()) / r.slack.get_d();
    r.max_ratio = std::max(r.max_ratio, ratio);
    if (d2 > slack_sq) r.containment_violations.push_back({i, avg, d2, ratio});
  }
  r.observed = convex_hull(pts);
  r.hausdorff_bound = hausdorff(r.observed, r.analytic);
  return r;
}

std::string cloud_to_csv(const std::vector<RotationSample>& samples) {
  std::ostringstream os;
  os << "index,start_axis,start,steps,x_num,x_den,y_num,y_den,x,y,classification,segments\n";
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const RotationSample& s = samples[i];
    const PlanarRational& a = s.avg_displacement;
    os << i << ',' << axis_name(s.start.axis) << ',' << to_string(s.start.coord) << ',' << s.steps << ','
       << a.x.get_num() << ',' << a.x.get_den() << ',' << a.y.get_num() << ',' << a.y.get_den() << ','
       << to_decimal(a.x) << ',' << to_decimal(a.y) << ',' << kind_name(s.classification.kind) << ','
       << s.classification.segments.size() << '\n';
  }
  return os.str();
}

}  // namespace skelrot
