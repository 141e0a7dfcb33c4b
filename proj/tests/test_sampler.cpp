#include "quadrant/errors.hpp"
#include "quadrant/maps.hpp"
#include "quadrant/polynomial.hpp"
#include "quadrant/sampler.hpp"

#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <cstring>
#include <string>

using namespace qatlas;

namespace {

// Restores the thread override when a test ends.
struct ThreadOverride {
  explicit ThreadOverride(const char *n) { setenv("QUADRANT_ATLAS_THREADS", n, 1); }
  ~ThreadOverride() { unsetenv("QUADRANT_ATLAS_THREADS"); }
};

bool same(const SamplerReport &a, const SamplerReport &b) {
  auto bits_equal = [](double x, double y) { return std::memcmp(&x, &y, sizeof x) == 0; };
  return a.check == b.check && a.checked == b.checked && a.failures == b.failures &&
         bits_equal(a.min_component_1, b.min_component_1) && bits_equal(a.min_component_2, b.min_component_2) &&
         bits_equal(a.max_relative_error, b.max_relative_error) && a.first_failure_index == b.first_failure_index;
}

} // namespace

TEST_CASE("splitmix64 stream") {
  SplitMix64 rng(0);
  CHECK(rng.next() == 0xE220A8397B1DCDAFULL);
  CHECK(rng.next() == 0x6E789E6AA1B965F4ULL);

  SplitMix64 u(12345);
  for (int k = 0; k < 100000; ++k) {
    const double x = u.uniform();
    REQUIRE(x >= 0.0);
    REQUIRE(x < 1.0);
    const double y = u.uniform(-3.0, 5.0);
    REQUIRE(y >= -3.0);
    REQUIRE(y < 5.0);
  }
}

TEST_CASE("config validation") {
  CHECK_THROWS_AS(check_positivity({0, 1, 50}), DomainError);
  CHECK_THROWS_AS(check_positivity({10, 1, 0}), DomainError);
  CHECK_THROWS_AS(check_f2_equals_h_g({10, 1, -1}), DomainError);
  CHECK_THROWS_AS(check_mu_gluing(1), DomainError);
}

TEST_CASE("positivity") {
  const PolyMap2 f = build_theorem_map();
  CHECK(evaluate_exact(f.component1, 0, 0) == 1);
  CHECK(evaluate_exact(f.component2, 0, 0) == 1);
  for (int t = -20; t <= 20; ++t) {
    CHECK(evaluate_exact(f.component1, mpq_class(t, 3), 0) == 1);
    CHECK(evaluate_float(f.component1, t / 3.0, 0.0).value == 1.0);
  }

  const SamplerReport grid = check_positivity_exact_grid();
  CHECK(grid.checked == 441);
  CHECK(grid.failures == 0);
  CHECK(grid.min_component_1 > 0);
  CHECK(grid.min_component_2 > 0);

  const SamplerReport r = check_positivity({20000, 42, 50});
  CHECK(r.check == "positivity");
  CHECK(r.checked == 20000 + 441);
  CHECK(r.failures == 0);
  CHECK(r.min_component_1 > 0);
  CHECK(r.min_component_2 > 0);
  CHECK_FALSE(r.first_failure_input.has_value());
  CHECK(r.ok());

  // Near the origin the minimum stays well away from zero.
  const SamplerReport small = check_positivity({20000, 1, 1});
  CHECK(small.failures == 0);
  CHECK(small.min_component_1 > 1e-3);
}

TEST_CASE("f2 = h o g") {
  const Point2 a = eval_h(eval_g({1, 1})), b = eval_h(eval_g({0, 0}));
  CHECK(a.u == 1.0);
  CHECK(a.v == 1.0);
  CHECK(b.u == 1.0);
  CHECK(b.v == 1.0);

  const SamplerReport r = check_f2_equals_h_g({10000, 7, 50});
  CHECK(r.failures == 0);
  CHECK(r.max_relative_error <= 1e-10);
  CHECK(r.tolerance == 1e-10);
  CHECK(r.min_component_1 > 0);
  CHECK(r.min_component_2 > 0);
}

TEST_CASE("g o psi = phi") {
  const Point3 lhs = eval_g(eval_psi({1, kPi / 4})), rhs = eval_phi({1, kPi / 4});
  CHECK(std::abs(lhs.x - rhs.x) <= 1e-12);
  CHECK(std::abs(lhs.y - rhs.y) <= 1e-12);
  CHECK(std::abs(lhs.z - rhs.z) <= 1e-12);

  const SamplerReport r = check_g_psi_equals_phi({10000, 11, 50});
  CHECK(r.failures == 0);
  CHECK(r.max_relative_error <= 1e-10);
}

TEST_CASE("phi bound") {
  for (double t : {0.0, 1.0, 50.0}) {
    const Point3 p = eval_phi({t, kHalfPi});
    CHECK(p.x * p.x + p.z * p.z == doctest::Approx(t * t));
  }
  const SamplerReport r = check_phi_bound({100000, 3, 50});
  CHECK(r.failures == 0);
  CHECK(r.max_relative_error <= 0.0); // largest shortfall is non-positive
}

TEST_CASE("gluing") {
  const Point3 a = eval_phi({0, 0}), b = eval_phi({0, kHalfPi});
  CHECK(a.x == 0.0);
  CHECK(b.x == 0.0);
  CHECK(std::abs(a.y) <= 1e-15);
  CHECK(std::abs(b.y) <= 1e-15);
  const SamplerReport r = check_mu_gluing(1001);
  CHECK(r.checked == 1001);
  CHECK(r.failures == 0);
  CHECK(r.max_relative_error <= 1e-12);
}

TEST_CASE("failures point at the offending input") {
  // A range this large overflows the expanded polynomial; those samples are
  // reported, with the smallest global index first.
  const SamplerReport r = check_positivity({40000, 5, 1e200});
  CHECK(r.failures > 0);
  REQUIRE(r.first_failure_index.has_value());
  REQUIRE(r.first_failure_input.has_value());
  CHECK(*r.first_failure_index < 40000u);
  const PolyMap2 f = build_theorem_map();
  const Point2 p = *r.first_failure_input;
  CHECK_FALSE(evaluate_float(f.component2, p.u, p.v).finite);
}

TEST_CASE("reports do not depend on the thread count") {
  const SamplerConfig cfg{3 * kSampleChunk + 17, 42, 50};
  SamplerReport base[4];
  {
    ThreadOverride one("1");
    base[0] = check_positivity(cfg);
    base[1] = check_f2_equals_h_g(cfg);
    base[2] = check_g_psi_equals_phi(cfg);
    base[3] = check_phi_bound(cfg);
  }
  for (const char *n : {"2", "8"}) {
    ThreadOverride over(n);
    CHECK(same(check_positivity(cfg), base[0]));
    CHECK(same(check_f2_equals_h_g(cfg), base[1]));
    CHECK(same(check_g_psi_equals_phi(cfg), base[2]));
    CHECK(same(check_phi_bound(cfg), base[3]));
  }

  // Chunk k is seeded with seed + k, so the second chunk of seed 0 is the
  // first chunk of seed 1.
  const SamplerReport a = check_f2_equals_h_g({2 * kSampleChunk, 0, 10});
  const SamplerReport b = check_f2_equals_h_g({kSampleChunk, 0, 10});
  const SamplerReport c = check_f2_equals_h_g({kSampleChunk, 1, 10});
  CHECK(a.max_relative_error == std::max(b.max_relative_error, c.max_relative_error));
  CHECK(a.min_component_1 == std::min(b.min_component_1, c.min_component_1));
}
