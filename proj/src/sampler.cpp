#include "quadrant/sampler.hpp"

#include "quadrant/errors.hpp"
#include "quadrant/parallel.hpp"
#include "quadrant/polynomial.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

namespace qatlas {

void SamplerConfig::validate() const {
  if (count < 1 || !(range > 0.0) || !std::isfinite(range))
    throw DomainError("sampler config: count must be >= 1 and range > 0");
}

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct Tally {
  std::size_t checked = 0;
  std::size_t failures = 0;
  double min1 = kInf;
  double min2 = kInf;
  double max_error = 0.0;
  std::optional<std::size_t> first_index;
  std::optional<Point2> first_input;

  void fail(std::size_t index, Point2 input) {
    ++failures;
    if (!first_index || index < *first_index) {
      first_index = index;
      first_input = input;
    }
  }

  void merge(const Tally &o) {
    checked += o.checked;
    failures += o.failures;
    min1 = std::min(min1, o.min1);
    min2 = std::min(min2, o.min2);
    max_error = std::max(max_error, o.max_error);
    if (o.first_index && (!first_index || *o.first_index < *first_index)) {
      first_index = o.first_index;
      first_input = o.first_input;
    }
  }
};

// sample(rng, global_index, tally) is called once per sample, in order
// within each chunk.
template <class Sample> Tally run_chunks(const SamplerConfig &cfg, Sample sample) {
  cfg.validate();
  const std::size_t chunks = (cfg.count + kSampleChunk - 1) / kSampleChunk;
  std::vector<Tally> tallies(chunks);
  parallel_for(chunks, [&](std::size_t k) {
    SplitMix64 rng(cfg.seed + k);
    const std::size_t begin = k * kSampleChunk;
    const std::size_t end = std::min(cfg.count, begin + kSampleChunk);
    Tally &t = tallies[k];
    for (std::size_t i = begin; i < end; ++i) {
      sample(rng, i, t);
      ++t.checked;
    }
  });
  Tally total;
  for (const auto &t : tallies)
    total.merge(t);
  return total;
}

SamplerReport to_report(std::string name, const Tally &t, double tolerance, bool with_minima) {
  SamplerReport r;
  r.check = std::move(name);
  r.checked = t.checked;
  r.failures = t.failures;
  r.min_component_1 = with_minima ? t.min1 : 0.0;
  r.min_component_2 = with_minima ? t.min2 : 0.0;
  r.max_relative_error = t.max_error;
  r.tolerance = tolerance;
  r.first_failure_input = t.first_input;
  r.first_failure_index = t.first_index;
  return r;
}

double relative_gap(double p, double q) {
  const double gap = std::abs(p - q) / std::max({std::abs(p), std::abs(q), 1.0});
  return std::isnan(gap) ? kInf : gap;
}

const PolyMap2 &theorem_map() {
  static const PolyMap2 f = build_theorem_map();
  return f;
}

const PolyMap2 &f2_map() {
  static const PolyMap2 f = build_f2();
  return f;
}

} // namespace

SamplerReport check_positivity_exact_grid() {
  const auto &f = theorem_map();
  Tally t;
  std::size_t index = 0;
  for (int i = -10; i <= 10; ++i) {
    for (int j = -10; j <= 10; ++j, ++index) {
      const mpq_class x(i, 2), y(j, 2);
      const mpq_class c1 = evaluate_exact(f.component1, x, y);
      const mpq_class c2 = evaluate_exact(f.component2, x, y);
      t.min1 = std::min(t.min1, c1.get_d());
      t.min2 = std::min(t.min2, c2.get_d());
      ++t.checked;
      if (sgn(c1) <= 0 || sgn(c2) <= 0)
        t.fail(index, {x.get_d(), y.get_d()});
    }
  }
  return to_report("positivity-exact-grid", t, 0.0, true);
}

SamplerReport check_positivity(const SamplerConfig &cfg) {
  const auto &f = theorem_map();
  Tally t = run_chunks(cfg, [&](SplitMix64 &rng, std::size_t i, Tally &tally) {
    const double x = rng.uniform(-cfg.range, cfg.range);
    const double y = rng.uniform(-cfg.range, cfg.range);
    const FloatValue c1 = evaluate_float(f.component1, x, y);
    const FloatValue c2 = evaluate_float(f.component2, x, y);
    tally.min1 = std::min(tally.min1, c1.value);
    tally.min2 = std::min(tally.min2, c2.value);
    if (!c1.finite || !c2.finite || !(c1.value > 0.0) || !(c2.value > 0.0))
      tally.fail(i, {x, y});
  });

  // Exact pass; its indices follow the random samples.
  const SamplerReport grid = check_positivity_exact_grid();
  Tally g;
  g.checked = grid.checked;
  g.failures = grid.failures;
  g.min1 = grid.min_component_1;
  g.min2 = grid.min_component_2;
  if (grid.first_failure_index) {
    g.first_index = cfg.count + *grid.first_failure_index;
    g.first_input = grid.first_failure_input;
  }
  t.merge(g);
  return to_report("positivity", t, 0.0, true);
}

SamplerReport check_f2_equals_h_g(const SamplerConfig &cfg) {
  const auto &f2 = f2_map();
  Tally t = run_chunks(cfg, [&](SplitMix64 &rng, std::size_t i, Tally &tally) {
    const Point2 p{rng.uniform(0.0, cfg.range), rng.uniform(0.0, cfg.range)};
    const double p1 = evaluate_float(f2.component1, p.u, p.v).value;
    const double p2 = evaluate_float(f2.component2, p.u, p.v).value;
    const Point2 hg = eval_h(eval_g(p));
    const double err = std::max(relative_gap(p1, hg.u), relative_gap(p2, hg.v));
    tally.min1 = std::min(tally.min1, p1);
    tally.min2 = std::min(tally.min2, p2);
    tally.max_error = std::max(tally.max_error, err);
    if (!(err <= kIdentityTolerance))
      tally.fail(i, p);
  });
  return to_report("f2=h.g", t, kIdentityTolerance, true);
}

SamplerReport check_g_psi_equals_phi(const SamplerConfig &cfg) {
  constexpr double kThetaLow = 0.01;
  Tally t = run_chunks(cfg, [&](SplitMix64 &rng, std::size_t i, Tally &tally) {
    const ParamPoint p{rng.uniform(0.0, 10.0), rng.uniform(kThetaLow, kHalfPi - kThetaLow)};
    const Point3 lhs = eval_g(eval_psi(p));
    const Point3 rhs = eval_phi(p);
    const double err =
        std::max({relative_gap(lhs.x, rhs.x), relative_gap(lhs.y, rhs.y), relative_gap(lhs.z, rhs.z)});
    tally.max_error = std::max(tally.max_error, err);
    if (!(err <= kIdentityTolerance))
      tally.fail(i, {p.rho, p.theta});
  });
  return to_report("g.psi=phi", t, kIdentityTolerance, false);
}

SamplerReport check_phi_bound(const SamplerConfig &cfg) {
  Tally t = run_chunks(cfg, [&](SplitMix64 &rng, std::size_t i, Tally &tally) {
    const double rho = rng.uniform(0.0, 100.0);
    // Closed interval: 53-bit integer over 2^53 - 1.
    const double theta = kHalfPi * (static_cast<double>(rng.next() >> 11) / 0x1.fffffffffffffp52);
    const Point3 phi = eval_phi({rho, theta});
    const double lhs = phi.x * phi.x + phi.z * phi.z;
    const double rhs = rho * rho / 4.0;
    // Shortfall relative to the bound; negative means the bound holds.
    const double shortfall = (rhs - lhs) / std::max(1.0, rho * rho);
    tally.max_error = std::max(tally.max_error, shortfall);
    if (!(lhs >= rhs - kInequalitySlack * std::max(1.0, rho * rho)))
      tally.fail(i, {rho, theta});
  });
  return to_report("phi-bound", t, kInequalitySlack, false);
}

SamplerReport check_mu_gluing(std::size_t grid) {
  if (grid < 2)
    throw DomainError("check_mu_gluing: grid must be at least 2");
  Tally t;
  for (std::size_t i = 0; i < grid; ++i) {
    const double theta = i + 1 == grid ? kHalfPi : kHalfPi * static_cast<double>(i) / static_cast<double>(grid - 1);
    const double mirror = kHalfPi - theta;
    const Point3 a = eval_phi({0.0, theta});
    const Point3 b = eval_phi({0.0, mirror});
    const double phi_gap = std::max({std::abs(a.x - b.x), std::abs(a.y - b.y), std::abs(a.z - b.z)});
    const double mu_gap = std::abs(eval_mu(theta) - eval_mu(mirror));
    t.max_error = std::max(t.max_error, phi_gap);
    ++t.checked;
    if (!(phi_gap <= kGluingTolerance) || !(mu_gap <= kMuGluingTolerance))
      t.fail(i, {0.0, theta});
  }
  return to_report("mu-gluing", t, kGluingTolerance, false);
}

} // namespace qatlas
