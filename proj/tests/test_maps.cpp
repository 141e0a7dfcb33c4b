#include "quadrant/errors.hpp"
#include "quadrant/maps.hpp"
#include "quadrant/polynomial.hpp"
#include "quadrant/sampler.hpp"

#include <doctest.h>

#include <cmath>

using namespace qatlas;
using doctest::Approx;

namespace {

double rel_gap(double p, double q) { return std::abs(p - q) / std::max({std::abs(p), std::abs(q), 1.0}); }

void check_point(Point3 got, Point3 want, double tol) {
  CHECK(std::abs(got.x - want.x) <= tol);
  CHECK(std::abs(got.y - want.y) <= tol);
  CHECK(std::abs(got.z - want.z) <= tol);
}

} // namespace

TEST_CASE("g and h") {
  check_point(eval_g({0, 0}), {-1, 0, -1}, 0.0);
  check_point(eval_g({1, 1}), {0, 1, 0}, 0.0);
  check_point(eval_g({4, 1}), {18, 8, 63}, 0.0);
  CHECK_THROWS_AS(eval_g({-1e-3, 1}), DomainError);

  const Point2 zero = eval_h({0, 0, 0});
  CHECK(zero.u == 0.0);
  CHECK(zero.v == 0.0);
  const Point2 h = eval_h({1, 2, 3});
  CHECK(h.u == 5.0);
  CHECK(h.v == 13.0);

  const Point2 hg = eval_h(eval_g({1, 1}));
  const PolyMap2 f2 = build_f2();
  CHECK(hg.u == 1.0);
  CHECK(hg.v == 1.0);
  CHECK(evaluate_exact(f2.component1, 1, 1) == 1);
  CHECK(evaluate_exact(f2.component2, 1, 1) == 1);
}

TEST_CASE("f2 equals h o g on [0, 20]^2") {
  const PolyMap2 f2 = build_f2();
  SplitMix64 rng(17);
  double worst = 0.0;
  for (int k = 0; k < 10000; ++k) {
    const Point2 p{rng.uniform(0, 20), rng.uniform(0, 20)};
    const Point2 hg = eval_h(eval_g(p));
    worst = std::max(worst, rel_gap(evaluate_float(f2.component1, p.u, p.v).value, hg.u));
    worst = std::max(worst, rel_gap(evaluate_float(f2.component2, p.u, p.v).value, hg.v));
  }
  CHECK(worst <= 1e-10);
}

TEST_CASE("psi") {
  const Point2 a = eval_psi({0, kPi / 4});
  CHECK(a.u == Approx(1.0).epsilon(1e-15));
  CHECK(a.v == Approx(1.0).epsilon(1e-15));
  const Point2 b = eval_psi({1, kPi / 4});
  CHECK(b.u == Approx(1.0).epsilon(1e-15));
  CHECK(b.v == Approx(1.0 + std::sqrt(2.0) / 4.0).epsilon(1e-15));

  CHECK_THROWS_AS(eval_psi({1, 0}), DomainError);
  CHECK_THROWS_AS(eval_psi({1, kHalfPi}), DomainError);

  SplitMix64 rng(1);
  for (int k = 0; k < 10000; ++k) {
    const Point2 p = eval_psi({rng.uniform(0, 10), rng.uniform(0.01, kHalfPi - 0.01)});
    REQUIRE(p.u > 0);
    REQUIRE(p.v > 0);
  }
}

TEST_CASE("phi") {
  for (double t : {0.0, 0.5, 3.0, 47.0}) {
    check_point(eval_phi({t, kHalfPi}), {0, 0, t}, 1e-12);
    check_point(eval_phi({t, 0}), {t, 0, 0}, 1e-12);
  }
  check_point(eval_phi({0, kPi / 4}), {0, 1, 0}, 1e-15);
}

TEST_CASE("g o psi equals phi on the open strip") {
  SplitMix64 rng(23);
  double worst = 0.0;
  for (int k = 0; k < 10000; ++k) {
    const ParamPoint p{rng.uniform(0, 10), rng.uniform(0.01, kHalfPi - 0.01)};
    const Point3 lhs = eval_g(eval_psi(p)), rhs = eval_phi(p);
    worst = std::max({worst, rel_gap(lhs.x, rhs.x), rel_gap(lhs.y, rhs.y), rel_gap(lhs.z, rhs.z)});
  }
  CHECK(worst <= 1e-10);
}

TEST_CASE("phi lower bound, symmetry and edge collapse") {
  SplitMix64 rng(31);
  for (int k = 0; k < 100000; ++k) {
    const double rho = rng.uniform(0, 100), theta = rng.uniform(0, kHalfPi);
    const Point3 p = eval_phi({rho, theta});
    REQUIRE(p.x * p.x + p.z * p.z >= rho * rho / 4 - 1e-12 * std::max(1.0, rho * rho));
  }

  for (int i = 0; i <= 1000; ++i) {
    const double theta = kHalfPi * i / 1000.0;
    const Point3 a = eval_phi({0, theta}), b = eval_phi({0, kHalfPi - theta});
    REQUIRE(std::abs(a.x - b.x) <= 1e-12);
    REQUIRE(std::abs(a.y - b.y) <= 1e-12);
    REQUIRE(a.z == 0.0);
    REQUIRE(b.z == 0.0);
  }

  for (int i = 0; i <= 1000; ++i) {
    const double t = 0.1 * i;
    const Point3 top = eval_phi({t, kHalfPi}), bottom = eval_phi({t, 0});
    REQUIRE(std::abs(top.x) <= 1e-12);
    REQUIRE(std::abs(top.y) <= 1e-12);
    REQUIRE(std::abs(top.z - t) <= 1e-12);
    REQUIRE(std::abs(bottom.x - t) <= 1e-12);
    REQUIRE(std::abs(bottom.y) <= 1e-12);
    REQUIRE(std::abs(bottom.z) <= 1e-12);
  }
}

TEST_CASE("xi and zeta") {
  CHECK(eval_xi1(5.0, 0.0, 2.0) == 2.0);
  CHECK(eval_xi1(0.3, 2.0, 2.0) == 0.0);
  CHECK(eval_xi1(0.3, -7.0, 2.0) == 0.0);
  CHECK(eval_xi1(0.7, 1.0, 2.0) == Approx(std::sqrt(3.0)).epsilon(1e-15));
  CHECK(eval_xi2(1.0, 0.7, 2.0) == Approx(std::sqrt(3.0)).epsilon(1e-15));

  const double B = 2.5;
  check_point(eval_zeta1({0, 0, 4}, B), {0, 0, 4 - B}, 0.0);
  check_point(eval_zeta2({4, 0, 0}, B), {0, 0, 4 - B}, 0.0);

  // Points of the boundary circle flatten to the circle of radius A at height 0.
  const double A = 1.5;
  for (int k = 0; k < 64; ++k) {
    const double s = 2 * kPi * k / 64;
    const Point3 p{A * std::cos(s), A * std::sin(s), std::sqrt(B * B - A * A * std::sin(s) * std::sin(s))};
    const Point3 q = eval_zeta1(p, B);
    CHECK(std::abs(q.z) <= 1e-12);
    CHECK(std::abs(q.x * q.x + q.y * q.y - A * A) <= 1e-12);

    // The permuted circle, x = sqrt(B^2 - y^2) over y^2 + z^2 = A^2, flattens the same way.
    const Point3 r{p.z, p.y, p.x};
    const Point3 w = eval_zeta2(r, B);
    CHECK(std::abs(w.z) <= 1e-12);
    CHECK(std::abs(w.x * w.x + w.y * w.y - A * A) <= 1e-12);
  }
}

TEST_CASE("mu") {
  CHECK(eval_mu(kPi / 4) == 0.0);
  CHECK(eval_mu(0.0) == 1.0);
  CHECK(eval_mu(kHalfPi) == Approx(1.0).epsilon(1e-15));
  for (int i = 0; i < 100; ++i) {
    const double theta = kHalfPi * i / 99.0;
    CHECK(std::abs(eval_mu(theta) - eval_mu(kHalfPi - theta)) <= 1e-15);
    CHECK(eval_mu(theta) >= 0.0);
    CHECK(eval_mu(theta) <= 1.0 + 1e-15);
  }
}

TEST_CASE("objective F") {
  const Point2 a = objective_F({0, kPi / 4});
  CHECK(a.u == Approx(1.0).epsilon(1e-15));
  CHECK(a.v == Approx(1.0).epsilon(1e-15));
  const Point2 b = objective_F({3.0, kHalfPi});
  CHECK(std::abs(b.u) <= 1e-24);
  CHECK(b.v == 9.0);

  // Matches h(phi) off the edges.
  const Point2 c = objective_F({1.3, 0.4});
  const Point2 d = eval_h(eval_phi({1.3, 0.4}));
  CHECK(c.u == Approx(d.u).epsilon(1e-14));
  CHECK(c.v == Approx(d.v).epsilon(1e-14));
}

TEST_CASE("jacobian of F against central differences") {
  CHECK_THROWS_AS(jacobian_F({1, 0}), DomainError);
  CHECK_THROWS_AS(jacobian_F({1, kHalfPi}), DomainError);

  const double h = 1e-6;
  SplitMix64 rng(8);
  double worst = 0.0;
  for (int k = 0; k < 1000; ++k) {
    const ParamPoint p{rng.uniform(h, 10), rng.uniform(0.01, kHalfPi - 0.01)};
    const Jacobian2 J = jacobian_F(p);
    const Point2 rp = objective_F({p.rho + h, p.theta}), rm = objective_F({p.rho - h, p.theta});
    const Point2 tp = objective_F({p.rho, p.theta + h}), tm = objective_F({p.rho, p.theta - h});
    worst = std::max({worst, std::abs(J.d1_drho - (rp.u - rm.u) / (2 * h)),
                      std::abs(J.d2_drho - (rp.v - rm.v) / (2 * h)),
                      std::abs(J.d1_dtheta - (tp.u - tm.u) / (2 * h)),
                      std::abs(J.d2_dtheta - (tp.v - tm.v) / (2 * h))});
  }
  CHECK(worst <= 1e-5);
}
