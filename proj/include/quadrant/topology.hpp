#pragma once

#include "quadrant/maps.hpp"

#include <cstddef>
#include <functional>
#include <string_view>
#include <vector>

namespace qatlas {

enum class DiscVariant {
  D1, // z = xi1(x, y) over x^2 + y^2 <= A^2
  D2, // x = xi2(y, z) over y^2 + z^2 <= A^2
};

struct WarpedDiscSpec {
  DiscVariant variant = DiscVariant::D1;
  double A = 1.0; // disc radius
  double B = 1.0; // height scale inside xi, B >= A

  // Throws DomainError unless B >= A > 0.
  void validate() const;
};

struct TubeSpec {
  WarpedDiscSpec disc;
  double epsilon = 0.0;
  double M0 = 0.0;
  double M = 0.0;
};

// M0 = 2 sqrt(A^2 + B^2), M = 4 M0, epsilon = min(B, M0 - B) / 2.
TubeSpec make_tube(double A, double B, DiscVariant variant);

enum class LoopVariant { Alpha1, Alpha2 };

// Image of the boundary of [0, M] x [0, pi/2] under phi, traversed along
// parameter t in [0, 2M + pi/2].
struct BoundaryLoop {
  LoopVariant variant = LoopVariant::Alpha1;
  double M = 1.0;

  double length() const { return 2.0 * M + kHalfPi; }
};

// The loop that pairs with a given disc variant.
inline LoopVariant matching_loop(DiscVariant v) {
  return v == DiscVariant::D1 ? LoopVariant::Alpha1 : LoopVariant::Alpha2;
}

std::string_view to_string(DiscVariant v);
std::string_view to_string(LoopVariant v);

// Point of the boundary circle at angle s.
Point3 disc_boundary(const WarpedDiscSpec &spec, double s);

// Throws DomainError for t outside [0, loop.length()].
Point3 eval_loop(const BoundaryLoop &loop, double t);

// zeta1 for D1, zeta2 for D2.
Point3 flatten(const WarpedDiscSpec &spec, Point3 p);

// p lies in zeta^-1({q1^2 + q2^2 < (A + eps)^2} x (-eps, eps)).
bool tube_membership(Point3 p, const TubeSpec &tube);

struct HitInterval {
  double begin = 0.0; // first sample parameter inside the tube
  double end = 0.0;   // last sample parameter inside the tube
  std::size_t first_sample = 0;
  std::size_t last_sample = 0;
};

struct TransversalityReport {
  std::vector<HitInterval> hit_intervals;
  double expected_begin = 0.0; // B - eps
  double expected_end = 0.0;   // B + eps
  double grid_step = 0.0;
  double max_lateral_deviation = 0.0; // sup |(q1, q2)| over hit samples
  double max_affine_deviation = 0.0;  // sup |q3 - (t - B)| over hit samples
  bool ok = false;
};

inline constexpr double kTransversalTolerance = 1e-9;

// Samples t_i = i * length / (grid - 1), i = 0 .. grid - 1. Consecutive hits
// form one interval; a single miss splits intervals. Requires grid >= 1000
// and loop.M == tube.M.
TransversalityReport transversality_scan(const BoundaryLoop &loop, const TubeSpec &tube, std::size_t grid);

// Closed curve discretised for the midpoint rule: segment k has midpoint
// points[k] and chord vector tangents[k].
struct SampledCurve {
  std::vector<Point3> midpoints;
  std::vector<Point3> chords;
};

// Uniform parameter grid on [t0, t1]; the curve is expected to close.
SampledCurve sample_closed_curve(const std::function<Point3(double)> &curve, double t0, double t1,
                                 std::size_t segments);

struct LinkingResult {
  double value = 0.0;
  long rounded = 0;
  std::size_t loop_segments = 0;
  std::size_t circle_segments = 0;

  double error() const;
  bool ok() const; // error() <= kLinkingTolerance
};

inline constexpr double kLinkingTolerance = 0.01;
inline constexpr double kDegenerateDistance = 1e-9;

// Recorded sign of the linking number of a loop with its matching disc
// boundary, loop oriented by increasing t and circle by increasing s. The
// second pair is the mirror image of the first (swap x and z), hence the flip.
inline constexpr int expected_linking_sign(LoopVariant v) { return v == LoopVariant::Alpha1 ? 1 : -1; }

// (1 / 4 pi) sum (r1 - r2) . (d1 x d2) / |r1 - r2|^3 over all segment pairs.
// Rows are summed in order and combined by pairwise_sum, so the value does
// not depend on the thread count. Throws DegenerateGeometry when two
// midpoints come within kDegenerateDistance.
LinkingResult gauss_linking(const SampledCurve &first, const SampledCurve &second);

// Requires both counts >= 256.
LinkingResult gauss_linking(const BoundaryLoop &loop, const WarpedDiscSpec &spec, std::size_t loop_segments = 4096,
                            std::size_t circle_segments = 4096);

} // namespace qatlas
