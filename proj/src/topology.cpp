#include "quadrant/topology.hpp"

#include "quadrant/errors.hpp"
#include "quadrant/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace qatlas {

void WarpedDiscSpec::validate() const {
  if (!(A > 0.0) || !(B >= A) || !std::isfinite(B))
    throw DomainError("warped disc requires B >= A > 0");
}

TubeSpec make_tube(double A, double B, DiscVariant variant) {
  TubeSpec t;
  t.disc = WarpedDiscSpec{variant, A, B};
  t.disc.validate();
  t.M0 = 2.0 * std::sqrt(A * A + B * B);
  t.M = 4.0 * t.M0;
  t.epsilon = std::min(B, t.M0 - B) / 2.0;
  return t;
}

std::string_view to_string(DiscVariant v) { return v == DiscVariant::D1 ? "D1" : "D2"; }
std::string_view to_string(LoopVariant v) { return v == LoopVariant::Alpha1 ? "alpha1" : "alpha2"; }

Point3 disc_boundary(const WarpedDiscSpec &spec, double s) {
  const double c = spec.A * std::cos(s);
  const double n = spec.A * std::sin(s);
  const double h = std::sqrt(std::max(0.0, spec.B * spec.B - n * n));
  if (spec.variant == DiscVariant::D1)
    return {c, n, h};
  return {h, n, c};
}

Point3 eval_loop(const BoundaryLoop &loop, double t) {
  const double M = loop.M;
  if (!(t >= 0.0 && t <= loop.length()))
    throw DomainError("eval_loop: parameter outside [0, 2M + pi/2]");
  const bool first = loop.variant == LoopVariant::Alpha1;
  if (t <= M)
    return eval_phi({t, first ? kHalfPi : 0.0});
  // The second junction belongs to the last piece: phi is only Holder-1/2 at
  // the strip edges, so an angle off by one rounding of M + pi/2 would show.
  if (t < M + kHalfPi) {
    const double theta = first ? M + kHalfPi - t : t - M;
    return eval_phi({M, std::clamp(theta, 0.0, kHalfPi)});
  }
  const double rho = std::max(0.0, 2.0 * M + kHalfPi - t);
  return eval_phi({rho, first ? 0.0 : kHalfPi});
}

Point3 flatten(const WarpedDiscSpec &spec, Point3 p) {
  return spec.variant == DiscVariant::D1 ? eval_zeta1(p, spec.B) : eval_zeta2(p, spec.B);
}

bool tube_membership(Point3 p, const TubeSpec &tube) {
  const Point3 q = flatten(tube.disc, p);
  const double r = tube.disc.A + tube.epsilon;
  return q.x * q.x + q.y * q.y < r * r && std::abs(q.z) < tube.epsilon;
}

TransversalityReport transversality_scan(const BoundaryLoop &loop, const TubeSpec &tube, std::size_t grid) {
  if (grid < 1000)
    throw DomainError("transversality_scan: grid must be at least 1000");
  if (loop.M != tube.M)
    throw DomainError("transversality_scan: loop and tube use different M");

  TransversalityReport report;
  report.expected_begin = tube.disc.B - tube.epsilon;
  report.expected_end = tube.disc.B + tube.epsilon;
  report.grid_step = loop.length() / static_cast<double>(grid - 1);

  bool inside = false;
  for (std::size_t i = 0; i < grid; ++i) {
    const double t = i == grid - 1 ? loop.length() : static_cast<double>(i) * report.grid_step;
    const Point3 p = eval_loop(loop, t);
    if (!tube_membership(p, tube)) {
      inside = false;
      continue;
    }
    if (!inside)
      report.hit_intervals.push_back({t, t, i, i});
    inside = true;
    auto &hit = report.hit_intervals.back();
    hit.end = t;
    hit.last_sample = i;

    const Point3 q = flatten(tube.disc, p);
    report.max_lateral_deviation = std::max(report.max_lateral_deviation, std::hypot(q.x, q.y));
    report.max_affine_deviation = std::max(report.max_affine_deviation, std::abs(q.z - (t - tube.disc.B)));
  }

  if (report.hit_intervals.size() == 1) {
    const auto &hit = report.hit_intervals.front();
    report.ok = std::abs(hit.begin - report.expected_begin) <= report.grid_step &&
                std::abs(hit.end - report.expected_end) <= report.grid_step &&
                report.max_lateral_deviation <= kTransversalTolerance &&
                report.max_affine_deviation <= kTransversalTolerance;
  }
  return report;
}

SampledCurve sample_closed_curve(const std::function<Point3(double)> &curve, double t0, double t1,
                                 std::size_t segments) {
  SampledCurve out;
  out.midpoints.reserve(segments);
  out.chords.reserve(segments);
  const double h = (t1 - t0) / static_cast<double>(segments);
  Point3 prev = curve(t0);
  for (std::size_t k = 0; k < segments; ++k) {
    const double tb = k + 1 == segments ? t1 : t0 + static_cast<double>(k + 1) * h;
    const Point3 next = curve(tb);
    out.midpoints.push_back(curve(t0 + (static_cast<double>(k) + 0.5) * h));
    out.chords.push_back({next.x - prev.x, next.y - prev.y, next.z - prev.z});
    prev = next;
  }
  return out;
}

double LinkingResult::error() const { return std::abs(value - static_cast<double>(rounded)); }
bool LinkingResult::ok() const { return error() <= kLinkingTolerance; }

LinkingResult gauss_linking(const SampledCurve &first, const SampledCurve &second) {
  const std::size_t n = first.midpoints.size();
  const std::size_t m = second.midpoints.size();
  std::vector<double> rows(n, 0.0);

  parallel_for(n, [&](std::size_t i) {
    const Point3 r1 = first.midpoints[i];
    const Point3 d1 = first.chords[i];
    double row = 0.0;
    for (std::size_t j = 0; j < m; ++j) {
      const Point3 r2 = second.midpoints[j];
      const Point3 d2 = second.chords[j];
      const double dx = r1.x - r2.x, dy = r1.y - r2.y, dz = r1.z - r2.z;
      const double dist2 = dx * dx + dy * dy + dz * dz;
      if (dist2 < kDegenerateDistance * kDegenerateDistance)
        throw DegenerateGeometry("gauss_linking: curves pass within 1e-9 of each other");
      const double cx = d1.y * d2.z - d1.z * d2.y;
      const double cy = d1.z * d2.x - d1.x * d2.z;
      const double cz = d1.x * d2.y - d1.y * d2.x;
      row += (dx * cx + dy * cy + dz * cz) / (dist2 * std::sqrt(dist2));
    }
    rows[i] = row;
  });

  LinkingResult result;
  result.value = pairwise_sum(rows) / (4.0 * kPi);
  result.rounded = std::lround(result.value);
  result.loop_segments = n;
  result.circle_segments = m;
  return result;
}

LinkingResult gauss_linking(const BoundaryLoop &loop, const WarpedDiscSpec &spec, std::size_t loop_segments,
                            std::size_t circle_segments) {
  if (loop_segments < 256 || circle_segments < 256)
    throw DomainError("gauss_linking: segment counts must be at least 256");
  spec.validate();
  const SampledCurve a =
      sample_closed_curve([&](double t) { return eval_loop(loop, t); }, 0.0, loop.length(), loop_segments);
  const SampledCurve b =
      sample_closed_curve([&](double s) { return disc_boundary(spec, s); }, 0.0, 2.0 * kPi, circle_segments);
  return gauss_linking(a, b);
}

} // namespace qatlas
