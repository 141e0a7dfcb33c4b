#pragma once

#include "quadrant/maps.hpp"

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>

namespace qatlas {

// splitmix64; uniform() uses the top 53 bits.
class SplitMix64 {
public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  // [0, 1)
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
  // [lo, hi)
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

private:
  std::uint64_t state_;
};

struct SamplerConfig {
  std::size_t count = 10000;
  std::uint64_t seed = 0;
  double range = 50.0;

  void validate() const;
};

// Samples are drawn in chunks of this size; chunk k uses SplitMix64(seed + k).
inline constexpr std::size_t kSampleChunk = 1 << 14;

inline constexpr double kIdentityTolerance = 1e-10;
inline constexpr double kInequalitySlack = 1e-12;
inline constexpr double kGluingTolerance = 1e-12;
inline constexpr double kMuGluingTolerance = 1e-15;

struct SamplerReport {
  std::string check;
  std::size_t checked = 0;
  std::size_t failures = 0;
  double min_component_1 = 0.0;
  double min_component_2 = 0.0;
  double max_relative_error = 0.0;
  double tolerance = 0.0;
  std::optional<Point2> first_failure_input;
  std::optional<std::size_t> first_failure_index;

  bool ok() const { return failures == 0; }
};

// f at count points of [-range, range]^2 in floating point, plus an exact
// rational pass over the grid {-5, -4.5, ..., 5}^2 (441 points, counted in
// checked). A failure is any component <= 0.
SamplerReport check_positivity(const SamplerConfig &cfg);

// |f2 - h o g| / max(|f2|, |h o g|, 1) componentwise on [0, range]^2.
SamplerReport check_f2_equals_h_g(const SamplerConfig &cfg);

// |g o psi - phi| / max(|.|, |.|, 1) componentwise, rho in [0, 10],
// theta in (0.01, pi/2 - 0.01). Ignores cfg.range.
SamplerReport check_g_psi_equals_phi(const SamplerConfig &cfg);

// phi1^2 + phi3^2 >= rho^2 / 4 - 1e-12 max(1, rho^2), rho in [0, 100],
// theta in [0, pi/2]. Ignores cfg.range.
SamplerReport check_phi_bound(const SamplerConfig &cfg);

// phi(0, theta) == phi(0, pi/2 - theta) and mu(theta) == mu(pi/2 - theta) on
// a uniform grid of [0, pi/2]; grid >= 2.
SamplerReport check_mu_gluing(std::size_t grid);

// Exact rational grid used by check_positivity.
SamplerReport check_positivity_exact_grid();

} // namespace qatlas
