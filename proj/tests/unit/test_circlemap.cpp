#include <doctest.h>

#include <random>

#include "skelrot/circlemap.hpp"
#include "skelrot/errors.hpp"

using namespace skelrot;

namespace {

const DenjoyModel& golden_model() {
  static const DenjoyModel model = build_denjoy(build_param(std::vector<long>(25, 1), 20));
  return model;
}

Rational pq(const DenjoyModel& m) { return Rational(m.param.convergent_num, m.param.convergent_den); }

Rational frac(const Rational& x) { return x - floor_z(x); }

// Random rationals in [0,1) with moderate denominators.
std::vector<Rational> samples(int count, unsigned seed) {
  std::mt19937 rng(seed);
  std::uniform_int_distribution<long> den(2, 5000);
  std::vector<Rational> out;
  for (int i = 0; i < count; ++i) {
    long d = den(rng);
    out.push_back(make_rational(std::uniform_int_distribution<long>(0, d - 1)(rng), d));
  }
  return out;
}

}  // namespace

TEST_SUITE("circlemap") {

TEST_CASE("piecewise map validation") {
  using V = std::vector<Rational>;
  using P = std::vector<Piece>;
  CHECK_NOTHROW(PiecewiseCircleMap(V{0, Rational(1, 2)}, P{{0, 2, 0}, {0, 0, 1}}));
  CHECK_THROWS_AS(PiecewiseCircleMap(V{Rational(1, 4)}, P{{0, 1, 0}}), ValidationError);
  CHECK_THROWS_AS(PiecewiseCircleMap(V{0, Rational(1, 2)}, P{{0, 2, 0}, {0, 1, 0}}), ValidationError);
  CHECK_THROWS_AS(PiecewiseCircleMap(V{0}, P{{0, -1, 0}}), ValidationError);
  CHECK_THROWS_AS(PiecewiseCircleMap(V{0}, P{{0, 2, 0}}), ValidationError);
}

TEST_CASE("rigid rotation: degree one and rotation number") {
  PiecewiseCircleMap r = PiecewiseCircleMap::rotation(Rational(1, 4));
  CHECK(r.apply(Rational(7, 8)) == Rational(1, 8));
  CHECK(r.lift(Rational(-3, 2)) == Rational(-5, 4));
  RationalInterval est = rotation_number_estimate(r, Rational(1, 3), 100);
  CHECK(est.contains(Rational(1, 4)));
  CHECK(est.width() == Rational(1, 50));
  CHECK_THROWS_AS(rotation_number_estimate(r, 0, 0), ValidationError);
}

TEST_CASE("compose and inverse of affine maps") {
  const PiecewiseCircleMap& f = golden_model().denjoy;
  REQUIRE(f.all_affine());
  REQUIRE(f.strictly_increasing());
  PiecewiseCircleMap finv = inverse(f);
  CHECK(equal_maps(compose(f, finv), PiecewiseCircleMap::identity()));
  CHECK(equal_maps(compose(finv, f), PiecewiseCircleMap::identity()));
  PiecewiseCircleMap r = PiecewiseCircleMap::rotation(Rational(2, 7));
  PiecewiseCircleMap fr = compose(f, r);
  for (const Rational& x : samples(200, 3)) {
    CHECK(fr.lift(x) == f.lift(r.lift(x)));
    CHECK(finv.lift(f.lift(x)) == x);
  }
}

TEST_CASE("golden model structure") {
  const DenjoyModel& m = golden_model();
  CHECK(m.halfwidth == m.wandering_halfwidth * Rational(17, 18));
  CHECK(m.wandering_arc().length() == Rational(1, 50));
  CHECK(m.psi.apply(0) == m.tau);
  CHECK(m.tau > 0);
  CHECK(m.tau < 1);

  auto phi_plateaus = m.phi.plateaus();
  REQUIRE(phi_plateaus.size() == 1);
  CHECK(phi_plateaus[0].lo == -m.halfwidth);
  CHECK(phi_plateaus[0].hi == m.halfwidth);
  auto p_plateaus = m.p.plateaus();
  REQUIRE(p_plateaus.size() == 1);
  CHECK(p_plateaus[0].length() == 2 * m.halfwidth);
  CHECK(m.psi.plateaus().empty());
  CHECK(m.psi.strictly_increasing());

  for (const Rational& x : {Rational(-m.halfwidth), Rational(0), Rational(m.halfwidth / 3), m.halfwidth}) {
    CHECK(m.phi.lift(x) == m.tau);
    CHECK(m.p.lift(x) == 0);
  }
  CHECK(m.p.apply(Rational(1, 2)) == Rational(1, 2));
}

TEST_CASE("phi factors through the collapse") {
  const DenjoyModel& m = golden_model();
  for (const Rational& b : m.phi.breakpoints()) CHECK(m.phi.lift(b) == m.psi.lift(m.p.lift(b)));
  for (const Rational& b : m.p.breakpoints()) CHECK(m.phi.lift(b) == m.psi.lift(m.p.lift(b)));
  for (const Rational& x : samples(1000, 5)) CHECK(m.phi.lift(x) == m.psi.lift(m.p.lift(x)));
}

TEST_CASE("degree one lifts") {
  const DenjoyModel& m = golden_model();
  for (const Rational& x : samples(100, 9)) {
    for (const PiecewiseCircleMap* f : {&m.phi, &m.p, &m.psi, &m.h}) {
      CHECK(f->lift(x + 1) == f->lift(x) + 1);
      CHECK(f->lift(x - 3) == f->lift(x) - 3);
    }
  }
}

TEST_CASE("gaps are disjoint and mapped forward") {
  const DenjoyModel& m = golden_model();
  long K = m.gap_budget();
  REQUIRE(m.gap_index.size() == static_cast<std::size_t>(2 * K + 1));
  CHECK(m.gap_index.at(0).lo == m.wandering_arc().lo);
  CHECK(m.gap_index.at(0).hi == m.wandering_arc().hi);
  for (auto it = m.gap_index.begin(); it != m.gap_index.end(); ++it) {
    for (auto jt = std::next(it); jt != m.gap_index.end(); ++jt) CHECK_FALSE(arcs_intersect(it->second, jt->second));
  }
  for (long n = -K; n < K; ++n) {
    if (n == 0) continue;
    const Arc& g = m.gap_index.at(n);
    const Arc& next = m.gap_index.at(n + 1);
    Rational lo = m.phi.lift(g.lo), hi = m.phi.lift(g.hi);
    Rational shift = floor_z(lo - next.lo + Rational(1, 2));
    CHECK(lo - shift == next.lo);
    CHECK(hi - shift == next.hi);
  }
  CHECK(m.phi.lift(m.wandering_arc().lo) == m.wandering_image.lo);
  CHECK(m.phi.lift(m.wandering_arc().hi) == m.wandering_image.hi);
  CHECK(arc_contains(m.wandering_image, m.tau));
  CHECK_FALSE(arcs_intersect(m.wandering_arc(), m.wandering_image));
}

TEST_CASE("semiconjugacy to the rotation by p/q") {
  const DenjoyModel& m = golden_model();
  Rational r = pq(m);
  CHECK(semiconj_h(m, 0) == 0);
  CHECK(semiconj_h(m, m.wandering_halfwidth / 2) == 0);
  CHECK(semiconj_h(m, frac(-m.wandering_halfwidth / 2)) == 0);
  for (long n = -m.gap_budget(); n <= m.gap_budget(); ++n) {
    const Arc& g = m.gap_index.at(n);
    Rational mid = frac((g.lo + g.hi) / 2);
    CHECK(semiconj_h(m, mid) == frac(n * r));
  }
  // Sample away from the untracked part of the periodic orbit.
  int checked = 0;
  for (const Rational& x : samples(400, 13)) {
    Rational hx, hy;
    try {
      hx = semiconj_h(m, x);
      hy = semiconj_h(m, m.phi.apply(x));
    } catch (const WindowError&) {
      continue;
    }
    CHECK(hy == frac(hx + r));
    if (++checked == 100) break;
  }
  CHECK(checked == 100);

  Rational prev = semiconj_lift(m, Rational(-1), false);
  for (int i = -999; i <= 1000; ++i) {
    Rational cur = semiconj_lift(m, make_rational(i, 1000), false);
    CHECK(cur >= prev);
    prev = cur;
  }
  CHECK(semiconj_lift(m, Rational(5, 7) + 2, false) == semiconj_lift(m, Rational(5, 7), false) + 2);
}

TEST_CASE("semiconjugacy window error beyond the gap budget") {
  const DenjoyModel& m = golden_model();
  long k = m.table.position_of(m.gap_budget() + 1);
  Arc g = m.table.gap(k);
  CHECK_THROWS_AS(semiconj_h(m, frac((g.lo + g.hi) / 2)), WindowError);
}

TEST_CASE("wandering arc") {
  const DenjoyModel& m = golden_model();
  CHECK(wandering_check(m, 0));
  CHECK(wandering_check(m, 30));
  CHECK(wandering_check(m, m.gap_budget() - 1));
  CHECK_THROWS_AS(wandering_check(m, m.gap_budget()), ValidationError);

  // An arc of length 1/50 under the bare rotation comes back at a denominator.
  PiecewiseCircleMap rot = PiecewiseCircleMap::rotation(pq(m));
  auto k = first_return(rot, {Rational(-1, 100), Rational(1, 100)}, 100);
  REQUIRE(k.has_value());
  CHECK(*k == 34);
}

TEST_CASE("rotation number of the model") {
  const DenjoyModel& m = golden_model();
  RationalInterval a = rotation_number_estimate(m.phi, Rational(1, 3), 10000);
  RationalInterval b = rotation_number_estimate(m.phi, Rational(5, 7), 10000);
  CHECK(a.contains(pq(m)));
  CHECK(b.contains(pq(m)));
  CHECK(a.lo <= b.hi);
  CHECK(b.lo <= a.hi);
}

TEST_CASE("construction errors") {
  IrrationalParam g = build_param(std::vector<long>(25, 1), 20);
  DenjoyConfig c;
  c.gap_mass = 1;
  CHECK_THROWS_AS(build_denjoy(g, c), ValidationError);
  c = {};
  c.gap_mass = Rational(1, 100);
  CHECK_THROWS_AS(build_denjoy(g, c), ValidationError);
  c = {};
  c.gap_budget = 0;
  CHECK_THROWS_AS(build_denjoy(g, c), ValidationError);

  // q = 13: 2K+1 labels cannot fit in 13 orbit points.
  IrrationalParam small = build_param(std::vector<long>(25, 1), 6);
  c = {};
  c.gap_budget = 7;
  try {
    build_denjoy(small, c);
    FAIL("expected a collision error");
  } catch (const ValidationError& e) {
    CHECK(std::string(e.what()).find("7") != std::string::npos);
    CHECK(std::string(e.what()).find("-6") != std::string::npos);
  }
}

}
