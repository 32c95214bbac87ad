#include "skelrot/skeleton.hpp"

#include <string>

#include "skelrot/numeric.hpp"

namespace skelrot {

SkeletonPoint make_point(Axis axis, const Rational& coord) {
  Rational c = coord - floor_z(coord);
  if (c == 0) return origin();
  return {axis, c};
}

LiftedSkeletonPoint lift_point(const SkeletonPoint& pt) {
  SkeletonPoint b = make_point(pt.axis, pt.coord);
  LiftedSkeletonPoint out;
  out.axis = b.axis;
  out.coord = b.coord;
  return out;
}

PlanarRational position(const LiftedSkeletonPoint& pt) {
  Rational x(static_cast<long>(pt.cell_x));
  Rational y(static_cast<long>(pt.cell_y));
  if (pt.axis == Axis::h) x += pt.coord;
  else y += pt.coord;
  return {x, y};
}

std::array<double, 2> position(const LiftedPoint<double>& pt) {
  double x = static_cast<double>(pt.cell_x);
  double y = static_cast<double>(pt.cell_y);
  if (pt.axis == Axis::h) x += pt.coord;
  else y += pt.coord;
  return {x, y};
}

SkeletonPoint f_sigma(const DenjoyModel& m, Axis sigma, const SkeletonPoint& pt) {
  return base(half_step(m, sigma, lift_point(pt)));
}

SkeletonPoint f_apply(const DenjoyModel& m, const SkeletonPoint& pt) {
  return base(full_step(m, lift_point(pt)));
}

LiftedSkeletonPoint lifted_step(const DenjoyModel& m, const LiftedSkeletonPoint& pt) {
  return full_step(m, pt);
}

SkeletonPoint h_transport(const DenjoyModel& m, const SkeletonPoint& pt) {
  SkeletonPoint b = make_point(pt.axis, pt.coord);
  return make_point(b.axis, semiconj_h(m, b.coord));
}

// ---------------------------------------------------------------------------

const char* kind_name(OrbitClassification::Kind k) {
  switch (k) {
    case OrbitClassification::Kind::free_h: return "free_h";
    case OrbitClassification::Kind::free_v: return "free_v";
    case OrbitClassification::Kind::interacting: return "interacting";
  }
  return "?";
}

void FoldTracker::record(long half_time, Axis sigma, StepKind kind) {
  if (kind != StepKind::fold) return;
  if (!folds_.empty() && folds_.back().second == sigma) {
    throw ConsistencyError("returns to I^(h) and I^(v) do not alternate at half-time " +
                           std::to_string(half_time));
  }
  folds_.emplace_back(half_time, sigma);
}

OrbitClassification FoldTracker::finish(Axis final_axis, long horizon) const {
  OrbitClassification out;
  out.horizon_used = horizon;
  for (std::size_t i = 0; i < folds_.size(); ++i) {
    if (folds_[i].second != Axis::h) continue;
    out.vertical_visits.push_back(folds_[i].first / 2);
    if (i + 2 < folds_.size()) {
      long ta = folds_[i].first / 2;
      long s = (folds_[i + 1].first - 1) / 2;
      long tb = folds_[i + 2].first / 2;
      out.segments.emplace_back(s - ta, tb - s - 1);
    }
  }
  if (!out.segments.empty()) out.kind = OrbitClassification::Kind::interacting;
  else if (final_axis == Axis::h) out.kind = OrbitClassification::Kind::free_h;
  else out.kind = OrbitClassification::Kind::free_v;
  return out;
}

OrbitClassification classify_orbit(const DenjoyModel& m, const SkeletonPoint& pt, long horizon,
                                   std::size_t max_bits) {
  if (horizon < 0 || horizon > m.gap_budget() - 1) {
    throw ValidationError("classification horizon " + std::to_string(horizon) +
                          " exceeds the certified window K-1 = " + std::to_string(m.gap_budget() - 1));
  }
  LiftedSkeletonPoint x = lift_point(pt);
  FoldTracker tracker;
  for (long t = 0; t < horizon; ++t) {
    StepKind k;
    x = half_step(m, Axis::h, x, &k);
    tracker.record(2 * t, Axis::h, k);
    x = half_step(m, Axis::v, x, &k);
    tracker.record(2 * t + 1, Axis::v, k);
    if (bit_size(x.coord) > max_bits) {
      throw ValidationError("exact orbit exceeded the size budget at step " + std::to_string(t + 1));
    }
  }
  return tracker.finish(x.axis, horizon);
}

// ---------------------------------------------------------------------------
// Markov arcs

namespace {

void check_window(const DenjoyModel& m, long m_steps, long n_steps) {
  if (m_steps < 1 || n_steps < 1) throw ValidationError("Markov indices must be positive");
  long limit = m.gap_budget() - 1;
  if (m_steps > limit || n_steps > limit) {
    throw WindowError("Markov indices exceed the gap window " + std::to_string(limit));
  }
}

LiftedPoint<Quad2> vertical_start(const Quad2& u) {
  LiftedPoint<Quad2> pt;
  pt.axis = Axis::v;
  if (sign(u) < 0) {
    pt.coord = u + Quad2(Rational(1));
    pt.cell_y = -1;
  } else {
    pt.coord = u;
  }
  if (sign(pt.coord) == 0) pt.axis = Axis::h;
  return pt;
}

// Centered vertical coordinate of an orbit end point.
template <class T>
T centered_end(const LiftedPoint<T>& pt) {
  using S = ScalarTraits<T>;
  if (pt.axis == Axis::h) {
    if (sign(pt.coord) != 0) throw ConsistencyError("orbit left the Markov branch");
    return pt.coord;
  }
  if (sign(pt.coord - S::from(Rational(1, 2))) >= 0) return pt.coord - S::from(Rational(1));
  return pt.coord;
}

void verify_arc(const DenjoyModel& m, const MarkovArc& arc) {
  long period = arc.m + arc.n + 1;
  Quad2 w(m.halfwidth);
  int hits[2] = {0, 0};
  const Quad2* ends[2] = {&arc.lo, &arc.hi};
  for (int e = 0; e < 2; ++e) {
    LiftedPoint<Quad2> pt = vertical_start(*ends[e]);
    for (long t = 0; t < period; ++t) pt = full_step(m, pt);
    Quad2 c = centered_end(pt);
    if (sign(c - w) == 0) hits[e] = 1;
    else if (sign(c + w) == 0) hits[e] = -1;
    else throw ConsistencyError("Markov arc endpoint does not return to an endpoint of I^(v)");
  }
  if (hits[0] == hits[1]) throw ConsistencyError("Markov arc endpoints return to the same endpoint");

  // An interior point follows the diagram exactly once and stays inside I.
  RationalInterval in = arc.inner();
  Rational mid = (in.lo + in.hi) / 2;
  LiftedSkeletonPoint pt = lift_point(make_point(Axis::v, mid));
  FoldTracker tracker;
  for (long t = 0; t < period; ++t) {
    StepKind k;
    pt = half_step(m, Axis::h, pt, &k);
    tracker.record(2 * t, Axis::h, k);
    pt = half_step(m, Axis::v, pt, &k);
    tracker.record(2 * t + 1, Axis::v, k);
  }
  OrbitClassification cls = tracker.finish(pt.axis, period);
  Rational c = centered_end(pt);
  if (cls.vertical_visits != std::vector<long>{0} || abs(c) >= m.halfwidth) {
    throw ConsistencyError("interior point of a Markov arc does not follow its diagram");
  }
}

}  // namespace

RationalInterval MarkovArc::enclosure(int bits) const {
  return {enclose(lo, bits).lo, enclose(hi, bits).hi};
}

RationalInterval MarkovArc::inner(int bits) const {
  RationalInterval out{enclose(lo, bits).hi, enclose(hi, bits).lo};
  if (!(out.lo < out.hi)) throw ConsistencyError("Markov arc too short for its enclosure");
  return out;
}

Arc preimage_of_I(const DenjoyModel& m, long k) {
  if (k < 0 || k > m.gap_budget()) throw WindowError("preimage index outside the gap window");
  Arc a = m.I();
  for (long j = 1; j <= k; ++j) {
    const Arc& g = m.gap_index.at(-j);
    Rational v0 = m.phi.lift(g.lo);
    Rational v1 = m.phi.lift(g.hi);
    Rational t = -floor_z(Rational(a.lo - v0));
    if (a.hi + t > v1) throw ConsistencyError("preimage chain leaves its gap");
    Rational inv_slope = g.length() / (v1 - v0);
    a = {g.lo + (a.lo + t - v0) * inv_slope, g.lo + (a.hi + t - v0) * inv_slope};
  }
  Rational t = -floor_z(a.lo);
  return a.shifted(t);
}

std::vector<MarkovArc> markov_arcs(const DenjoyModel& m, long m_steps, long n_steps) {
  check_window(m, m_steps, n_steps);
  const Rational& tau = m.tau;
  const Rational& w = m.halfwidth;
  Arc am = preimage_of_I(m, m_steps);
  Arc an = preimage_of_I(m, n_steps);
  auto inside = [&](const Arc& a) { return a.lo > 0 && a.hi < tau; };
  if (!inside(am) || !inside(an)) return {};

  // phi^m maps A_m affinely onto I: G(z) = S z + C.
  Rational S = 2 * w / am.length();
  Rational C = -w - S * am.lo;
  // L_1, L_2 in I^(h): fold preimages of A_n.
  Quad1 l_inner = Quad1::root(Rational(w), Rational(1 - an.hi / tau));
  Quad1 l_outer = Quad1::root(Rational(w), Rational(1 - an.lo / tau));
  // u > 0 with phi^m(fold(u)) = l.
  auto u_of = [&](const Quad1& l, int side) {
    Quad1 z = (l - Quad1(C)) * Quad1(Rational(1 / S));
    Quad1 r = Quad1(Rational(1)) - z * Quad1(Rational(1 / tau));
    return Quad2::root(Quad1(Rational(side * w)), r);
  };
  Quad1 nl_inner = -l_inner;
  Quad1 nl_outer = -l_outer;

  std::vector<MarkovArc> out(4);
  out[0].lo = u_of(nl_outer, -1);
  out[0].hi = u_of(nl_inner, -1);
  out[1].lo = u_of(l_inner, -1);
  out[1].hi = u_of(l_outer, -1);
  out[2].lo = u_of(l_outer, 1);
  out[2].hi = u_of(l_inner, 1);
  out[3].lo = u_of(nl_inner, 1);
  out[3].hi = u_of(nl_outer, 1);
  for (int i = 0; i < 4; ++i) {
    out[i].m = m_steps;
    out[i].n = n_steps;
    out[i].branch = i + 1;
  }

  if (compare_enclosed(out[0].lo, Rational(-w)) <= 0 || compare_enclosed(out[3].hi, Rational(w)) >= 0) {
    throw ConsistencyError("Markov arcs leave I^(v)");
  }
  for (int i = 0; i < 4; ++i) {
    if (compare_enclosed(out[i].lo, out[i].hi) >= 0) throw ConsistencyError("empty Markov arc");
    if (i < 3 && compare_enclosed(out[i].hi, out[i + 1].lo) >= 0) {
      throw ConsistencyError("Markov arcs overlap");
    }
  }
  for (const auto& arc : out) verify_arc(m, arc);
  return out;
}

BranchOrbit branch_orbit(const DenjoyModel& m, const Rational& u, long period) {
  BranchOrbit out;
  LiftedSkeletonPoint pt = lift_point(make_point(Axis::v, u));
  if (u < 0) pt.cell_y = -1;
  out.half_points.push_back(pt);
  for (long t = 0; t < period; ++t) {
    pt = half_step(m, Axis::h, pt);
    out.half_points.push_back(pt);
    pt = half_step(m, Axis::v, pt);
    out.half_points.push_back(pt);
  }
  out.end = centered_end(pt);
  return out;
}

MarkovFixedPoint markov_fixed_point(const DenjoyModel& m, long m_steps, long n_steps, const Rational& tol) {
  if (tol <= 0) throw ValidationError("tolerance must be positive");
  std::vector<MarkovArc> arcs = markov_arcs(m, m_steps, n_steps);
  if (arcs.empty()) {
    throw ValidationError("(" + std::to_string(m_steps) + "," + std::to_string(n_steps) +
                          ") is not admissible");
  }
  long period = m_steps + n_steps + 1;
  RationalInterval in = arcs.front().inner();
  auto residual = [&](const Rational& u) -> Rational { return branch_orbit(m, u, period).end - u; };

  Rational a = in.lo, b = in.hi;
  Rational da = residual(a);
  Rational db = residual(b);
  if (sign(da) == sign(db)) throw ConsistencyError("branch residual has no sign change");
  MarkovFixedPoint out;
  for (long it = 1; it <= 4000; ++it) {
    Rational mid = (a + b) / 2;
    Rational dm = residual(mid);
    if (abs(dm) < tol) {
      out.u = mid;
      out.residual = dm;
      out.iterations = it;
      break;
    }
    if (sign(dm) == sign(da)) {
      a = mid;
      da = dm;
    } else {
      b = mid;
    }
    if (it == 4000) throw ConsistencyError("fixed-point bisection did not converge");
  }
  out.point = make_point(Axis::v, out.u);
  BranchOrbit orbit = branch_orbit(m, out.u, period);
  PlanarRational d = position(orbit.half_points.back()) - position(orbit.half_points.front());
  Rational dy = d.y - out.residual;
  if (dy.get_den() != 1 || d.x.get_den() != 1) throw ConsistencyError("non-integer period displacement");
  out.integer_displacement = {d.x.get_num(), dy.get_num()};
  return out;
}

SkeletonPoint fixed_point_in_K(const DenjoyModel& m, long m_steps, long n_steps, const Rational& tol) {
  return markov_fixed_point(m, m_steps, n_steps, tol).point;
}

PlanarRational rotation_vector_exact(const DenjoyModel& m, long m_steps, long n_steps) {
  const IrrationalParam& param = m.param;
  PlanarRational rv = rho_vec(param, m_steps, n_steps);
  std::array<Integer, 2> expected{ceil_multiple(param, m_steps), ceil_multiple(param, n_steps)};

  MarkovFixedPoint fp = markov_fixed_point(m, m_steps, n_steps);
  if (fp.integer_displacement != expected) {
    throw ConsistencyError("periodic orbit displacement differs from (ceil(m rho), ceil(n rho))");
  }

  long period = m_steps + n_steps + 1;
  BranchOrbit orbit = branch_orbit(m, fp.u, period);
  auto h0 = h_position(m, orbit.half_points.front());
  auto h1 = h_position(m, orbit.half_points.back());
  auto hm = h_position(m, orbit.half_points[1]);                 // x_{1/2}
  auto hn = h_position(m, orbit.half_points[2 * m_steps + 2]);   // x_{m+1}
  Rational am = alpha(param, m_steps).value;
  Rational an = alpha(param, n_steps).value;
  bool ok = h0[0].get_den() == 1 && h0[1].get_den() == 1 && h1[0] - h0[0] == Rational(expected[0]) &&
            h1[1] - h0[1] == Rational(expected[1]) && hm[0] - floor_z(hm[0]) == am &&
            hn[1] - floor_z(hn[1]) == an;
  if (!ok) throw ConsistencyError("transport identities fail on the periodic orbit");
  Rational s(period);
  if (rv.x * s != Rational(expected[0]) || rv.y * s != Rational(expected[1])) {
    throw ConsistencyError("rotation vector disagrees with rho_{m,n}");
  }
  return rv;
}

std::vector<RationalInterval> markov_nesting(const DenjoyModel& m, long m_steps, long n_steps, int levels,
                                             int bits) {
  std::vector<MarkovArc> arcs = markov_arcs(m, m_steps, n_steps);
  if (arcs.empty()) throw ValidationError("not admissible");
  long period = m_steps + n_steps + 1;
  RationalInterval in = arcs.front().inner(bits);
  auto end = [&](const Rational& u) { return branch_orbit(m, u, period).end; };
  bool increasing = end(in.lo) < end(in.hi);
  Rational eps(1);
  eps /= Integer(1) << bits;

  // Bracket of the branch preimage of y.
  auto preimage = [&](const Rational& y) {
    Rational a = in.lo, b = in.hi;
    while (b - a > eps) {
      Rational mid = (a + b) / 2;
      bool below = end(mid) < y;
      if (below == increasing) a = mid;
      else b = mid;
    }
    return RationalInterval{a, b};
  };

  std::vector<RationalInterval> out{arcs.front().enclosure(bits)};
  for (int j = 0; j < levels; ++j) {
    RationalInterval p = preimage(out.back().lo);
    RationalInterval q = preimage(out.back().hi);
    out.push_back({std::min(p.lo, q.lo), std::max(p.hi, q.hi)});
  }
  return out;
}

}  // namespace skelrot
