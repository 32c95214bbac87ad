#include <doctest.h>

#include <random>

#include "oracle.hpp"
#include "skelrot/algebraic.hpp"

using namespace skelrot;

namespace {

oracle::Dec dec(const Rational& x) {
  return oracle::Dec(x.get_num().get_str()) / oracle::Dec(x.get_den().get_str());
}

template <class Base>
oracle::Dec dec(const QuadExt<Base>& x) {
  if (!x.radicand()) return dec(x.a());
  return dec(x.a()) + dec(x.b()) * boost::multiprecision::sqrt(dec(*x.radicand()));
}

}  // namespace

TEST_SUITE("algebraic") {

TEST_CASE("sign of a + b sqrt(r) in one extension") {
  Quad1 s2 = Quad1::root(Rational(1), Rational(2));
  CHECK(sign(s2) == 1);
  CHECK(sign(s2 - Quad1(Rational(141, 100))) == 1);
  CHECK(sign(s2 - Quad1(Rational(142, 100))) == -1);
  CHECK(sign(s2 * s2 - Quad1(Rational(2))) == 0);
  CHECK(sign(-s2) == -1);

  std::mt19937 rng(7);
  std::uniform_int_distribution<long> d(-50, 50);
  for (int i = 0; i < 300; ++i) {
    Quad1 x(Rational(d(rng), 7), Rational(d(rng), 11), std::make_shared<const Rational>(Rational(3)));
    oracle::Dec v = dec(x);
    int expect = v > 0 ? 1 : (v < 0 ? -1 : 0);
    CHECK(sign(x) == expect);
  }
}

TEST_CASE("nested extension sign and enclosure agree with decimal reference") {
  std::mt19937 rng(11);
  std::uniform_int_distribution<long> d(1, 40);
  for (int i = 0; i < 100; ++i) {
    Quad1 inner = Quad1::root(Rational(d(rng), 9), Rational(5)) + Quad1(Rational(d(rng)));
    Quad2 x = Quad2::root(Quad1(Rational(1)), inner) - Quad2(Quad1(Rational(d(rng), 3)));
    oracle::Dec v = dec(x);
    int expect = v > 0 ? 1 : (v < 0 ? -1 : 0);
    CHECK(sign(x) == expect);
    RationalInterval e = enclose(x, 128);
    CHECK(dec(e.lo) <= v);
    CHECK(v <= dec(e.hi));
    CHECK(e.width() < Rational(1, 1L << 40));
    CHECK(floor_int(x) == static_cast<std::int64_t>(boost::multiprecision::floor(v)));
  }
}

TEST_CASE("floor at exact integers") {
  Quad1 three = Quad1::root(Rational(1), Rational(9));
  CHECK(floor_int(three) == 3);
  CHECK(floor_int(three - Quad1(Rational(1, 1000000000))) == 2);
  CHECK(floor_int(-three) == -3);
}

TEST_CASE("compare_enclosed orders mixed scalars") {
  Quad1 s2 = Quad1::root(Rational(1), Rational(2));
  Quad1 s3 = Quad1::root(Rational(1), Rational(3));
  CHECK(compare_enclosed(s2, s3) == -1);
  CHECK(compare_enclosed(s3, Rational(17, 10)) == 1);
  CHECK(compare_enclosed(Rational(1, 3), Rational(1, 3)) == 0);
}

TEST_CASE("mixing two different radicands is rejected") {
  Quad1 s2 = Quad1::root(Rational(1), Rational(2));
  Quad1 s3 = Quad1::root(Rational(1), Rational(3));
  CHECK_THROWS_AS(s2 + s3, std::logic_error);
}

}
