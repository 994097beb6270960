#include <doctest.h>

#include <cmath>
#include <set>

#include "suq/lattice.hpp"

using namespace suq;

TEST_SUITE("lattice") {

TEST_CASE("membership: negative half needs exponent >= 1") {
  CHECK(pos(0).in_lattice());
  CHECK(pos(-7).in_lattice());
  CHECK(pos(14).in_lattice());
  CHECK(neg(1).in_lattice());
  CHECK(neg(9).in_lattice());
  CHECK_FALSE(neg(0).in_lattice());   // -1 is not a lattice point
  CHECK_FALSE(neg(-2).in_lattice());
}

TEST_CASE("values and exponents") {
  QParam qp{0.5, false};
  CHECK(pos(3).value(qp) == doctest::Approx(0.125));
  CHECK(neg(2).value(qp) == doctest::Approx(-0.25));
  CHECK(pos(-1).value(qp) == doctest::Approx(2.0));
  CHECK(chi(pos(-1)) == -1);
  CHECK(chi(neg(5)) == 5);
  QParam q2 = qp.squared();
  CHECK(pos(2).value(q2) == doctest::Approx(0.0625));
}

TEST_CASE("kappa carries exponents to the squared grid") {
  QParam qp{0.5, false};
  QParam q2 = qp.squared();
  for (int k = -4; k <= 4; ++k) {
    for (int sg : {1, -1}) {
      LatticePoint x{sg, k};
      double xv = x.value(qp);
      CHECK(kappa(x).value(q2) == doctest::Approx(kappa(xv)));
      CHECK(chi(kappa(x)) == chi(x));  // same exponent read in base q^2
    }
  }
  CHECK(kappa(-0.5) == doctest::Approx(-0.25));
  CHECK(kappa(2.0) == doctest::Approx(4.0));
}

TEST_CASE("nu uses plain q") {
  QParam qp{0.5, false};
  CHECK(nu(pos(1), qp) == doctest::Approx(1.0));
  CHECK(nu(pos(2), qp) == doctest::Approx(1.0));
  CHECK(nu(pos(3), qp) == doctest::Approx(0.5));
  CHECK(nu(pos(0), qp) == doctest::Approx(0.5));
  CHECK(nu(pos(-1), qp) == doctest::Approx(0.125));
  CHECK(nu(neg(4), qp) == doctest::Approx(std::pow(0.5, 3.0)));
  // flag must not change nu
  CHECK(nu(pos(-1), qp.squared()) == doctest::Approx(0.125));
}

TEST_CASE("s_sign cases and zero rejection") {
  CHECK(s_sign(2.0, -3.0) == -1);
  CHECK(s_sign(-1.0, 5.0) == 1);
  CHECK(s_sign(1.0, 1.0) == 1);
  CHECK(s_sign(-2.0, -2.0) == 1);
  CHECK_THROWS_AS(s_sign(0.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(s_sign(1.0, 0.0), std::invalid_argument);
  CHECK(s_sign(pos(2), neg(1)) == -1);
  CHECK(s_sign(neg(1), pos(2)) == 1);
}

TEST_CASE("s_sign manipulation rules on lattice samples") {
  QParam qp{0.5, false};
  LatticeWindow w{-3, 3, 3};
  auto sgn = [](double v) { return v < 0 ? -1 : 1; };
  for (auto x : w.points()) {
    for (auto y : w.points()) {
      double xv = x.value(qp), yv = y.value(qp);
      CHECK(s_sign(xv, yv) == sgn(xv * yv) * s_sign(yv, xv));
      CHECK(s_sign(xv, yv) == -sgn(xv) * s_sign(xv, -yv));
      if (xv > 0) {
        for (auto z : w.points()) {
          double zv = z.value(qp);
          CHECK(s_sign(xv, yv) == sgn(yv * zv) * s_sign(xv, zv));
        }
      }
    }
  }
}

TEST_CASE("translate follows the zero-extension convention") {
  // direct product form
  auto r = translate(pos(-1), pos(3));
  REQUIRE(r.has_value());
  CHECK(*r == pos(2));

  // point shifts of delta functions use the inverse: the q-shift kills delta_{-q}
  CHECK_FALSE(translate(pos(1).inverse(), neg(1)).has_value());
  // the sign flip kills delta_p for p >= 1
  CHECK_FALSE(translate(neg(0), pos(0)).has_value());
  CHECK_FALSE(translate(neg(0), pos(-2)).has_value());
  CHECK(translate(neg(0), pos(2)).has_value());

  CHECK_FALSE(translate(pos(-3), neg(2)).has_value());
  CHECK(translate(pos(-1), neg(2)) == neg(1));
}

TEST_CASE("translate composes with the point product") {
  for (int sp : {1, -1})
    for (int kp = -2; kp <= 2; ++kp)
      for (int st : {1, -1})
        for (int kt = -2; kt <= 2; ++kt)
          for (int sx : {1, -1})
            for (int kx = -1; kx <= 3; ++kx) {
              LatticePoint p{sp, kp}, t{st, kt}, x{sx, kx};
              if (!x.in_lattice()) continue;
              auto inner = translate(t, x);
              if (!inner) continue;
              auto lhs = translate(p, *inner);
              auto rhs = translate(times(p, t), x);
              CHECK(lhs == rhs);
            }
}

TEST_CASE("window enumeration is sorted and duplicate-free") {
  QParam qp{0.5, false};
  LatticeWindow w{-8, 14, 8};
  auto pts = w.points();
  CHECK(static_cast<int>(pts.size()) == w.size());
  CHECK(w.size() == 23 + 8);
  std::set<std::pair<int, int>> seen;
  double prev = -1e300;
  for (auto& x : pts) {
    CHECK(w.contains(x));
    CHECK(x.in_lattice());
    double v = x.value(qp);
    CHECK(v > prev);
    prev = v;
    CHECK(seen.insert({x.sign, x.k}).second);
  }
  CHECK_FALSE(w.contains(pos(15)));
  CHECK_FALSE(w.contains(pos(-9)));
  CHECK_FALSE(w.contains(neg(9)));
  CHECK(w.contains(neg(8)));
}

TEST_CASE("parameter validation") {
  CHECK_THROWS_AS(validate(QParam{0.0, false}), std::invalid_argument);
  CHECK_THROWS_AS(validate(QParam{1.0, false}), std::invalid_argument);
  CHECK_THROWS_AS(validate(QParam{-0.5, false}), std::invalid_argument);
  CHECK_NOTHROW(validate(QParam{0.5, false}));
  CHECK_THROWS_AS(validate(LatticeWindow{3, 2, 5}), std::invalid_argument);
  CHECK_THROWS_AS(validate(LatticeWindow{-2, 2, -1}), std::invalid_argument);
  CHECK_NOTHROW(validate(LatticeWindow{-8, 14, 8}));
}

}  // TEST_SUITE
