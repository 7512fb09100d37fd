#include "doctest.h"

#include "shadiv/poly.hpp"

using namespace shadiv;

TEST_CASE("parse coefficient list and factored form") {
  const IntPoly a = IntPoly::parse("[1,0,0,0,-17]");
  CHECK(a.degree() == 4);
  CHECK(a.coeff(0) == -17);
  const IntPoly q1 = IntPoly::parse("(11x^2-67x+31)");
  const IntPoly q2 = IntPoly::parse("(-x^2-3x-1)");
  const IntPoly prod = IntPoly::parse("(11x^2-67x+31)*(-x^2-3x-1)");
  CHECK(prod == q1 * q2);
  CHECK(prod.leading() == -11);
  CHECK(prod.coeff(0) == -31);
  CHECK(IntPoly::parse("x^3 - x").coeff(1) == -1);
  CHECK_THROWS_AS(IntPoly::parse("[1,,2]"), Error);
}

TEST_CASE("discriminant and resultant") {
  // disc(x^3 + a x + b) = -4a^3 - 27b^2
  CHECK(discriminant(IntPoly::parse("x^3-x")) == 4);
  CHECK(discriminant(IntPoly::parse("x^3+2x+3")) == -4 * 8 - 27 * 9);
  CHECK(discriminant(IntPoly::parse("x^2-4")) == 16);
  CHECK(resultant(IntPoly::parse("x-1"), IntPoly::parse("x-3")) == -2);
  // disc(fg) = disc(f) disc(g) res(f,g)^2
  const IntPoly f = IntPoly::parse("x^2+1"), g = IntPoly::parse("x^2-2x+3");
  const ExactInt r = resultant(f, g);
  CHECK(discriminant(f * g) == discriminant(f) * discriminant(g) * r * r);
}

TEST_CASE("taylor shift and reversal") {
  const IntPoly f = IntPoly::parse("x^3+2x+5");
  const IntPoly s = f.taylor_shift(3);
  for (int x = -5; x <= 5; ++x) CHECK(s(ExactInt(x)) == f(ExactInt(x + 3)));
  const IntPoly r = f.reversed(4);
  CHECK(r.coeff(4) == 5);
  CHECK(r.coeff(1) == 1);
  CHECK(r.coeff(0) == 0);
}

TEST_CASE("real root isolation") {
  const IntPoly f = IntPoly::parse("x^3-x");
  CHECK(count_real_roots(f) == 3);
  const auto roots = isolate_real_roots(f, ExactRat(1, 64));
  REQUIRE(roots.size() == 3);
  CHECK(roots[0].lo <= -1);
  CHECK(roots[0].hi >= -1);
  const IntPoly g = IntPoly::parse("x^4-2");
  const auto gr = isolate_real_roots(g, ExactRat(1, 1 << 20));
  REQUIRE(gr.size() == 2);
  for (const auto& r : gr) {
    CHECK(r.hi - r.lo <= ExactRat(1, 1 << 20));
    CHECK(sgn(g(r.lo)) * sgn(g(r.hi)) <= 0);
  }
  CHECK(count_real_roots(IntPoly::parse("x^2+1")) == 0);
}
