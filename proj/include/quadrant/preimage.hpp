#pragma once

#include "quadrant/maps.hpp"

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace qatlas {

struct SolverConfig {
  double residual_tol = 1e-9; // relative sup-norm, scaled by max(a, b, 1)
  int max_newton_iters = 100;
  int grid_rho = 64;
  int grid_theta = 64;
  int max_backtracks = 40;

  // Throws DomainError on a non-positive tolerance or count.
  void validate() const;
};

// Target (a, b) in the open quadrant.
struct PreimageQuery {
  double a = 1.0;
  double b = 1.0;

  void validate() const;
  double scale() const;
};

// Seeds stay at least this far from the strip edges theta = 0, pi/2.
inline constexpr double kThetaMargin = 1e-6;
// Targets with min(a, b) at or below this get a denser theta lattice near the edges.
inline constexpr double kBoundaryTarget = 1e-6;

enum class SolveStage { SurfaceSeeded, DirectFallback };

std::string_view to_string(SolveStage s);

struct PreimageResult {
  double x = 0.0;
  double y = 0.0;
  double residual = 0.0;
  SolveStage stage = SolveStage::SurfaceSeeded;
  int newton_iters = 0; // both stages combined
  int seed_index = 0;
};

// Refinement stalled; carries the best iterate seen.
class RefineFailure : public std::runtime_error {
public:
  RefineFailure(const std::string &what, Point2 best, double residual)
      : std::runtime_error(what), best_(best), residual_(residual) {}
  Point2 best() const { return best_; }
  double residual() const { return residual_; }

private:
  Point2 best_;
  double residual_;
};

// Upper end of the rho search range: M of make_tube(sqrt(min(a,b)), sqrt(max(a,b))).
double search_radius(const PreimageQuery &q);

// Row-major lattice: rho = 0 followed by grid_rho - 1 log-spaced values up to
// search_radius; theta uniform on [kThetaMargin, pi/2 - kThetaMargin], with
// extra log-spaced values near both ends for boundary targets.
std::vector<ParamPoint> seed_lattice(const PreimageQuery &q, const SolverConfig &cfg);

struct SurfaceRoot {
  ParamPoint point;
  double residual = 0.0;
  int seed_index = 0;
  int newton_iters = 0;
};

// Damped Newton for objective_F(rho, theta) = (a, b) from one seed, iterates
// clamped to [0, rho_max] x [kThetaMargin, pi/2 - kThetaMargin]. Returns false
// when the tolerance is not reached.
bool newton_surface(const PreimageQuery &q, const SolverConfig &cfg, ParamPoint seed, double rho_max,
                    SurfaceRoot &out);

// First lattice seed (in scan order, starting at first_seed) whose Newton run
// converges. Throws SolverFailure once the lattice is exhausted.
SurfaceRoot solve_surface_from(const PreimageQuery &q, const SolverConfig &cfg, int first_seed);

ParamPoint solve_surface(const PreimageQuery &q, const SolverConfig &cfg);

// psi applied to a converged parameter; requires theta inside the margin.
Point2 lift_to_quadrant(ParamPoint p);

struct RefineOutcome {
  Point2 point;
  double residual = 0.0;
  int iterations = 0;
};

// Damped Newton on f2(u, v) = (a, b) with u, v clamped at 0. Throws RefineFailure.
RefineOutcome refine_direct_detailed(Point2 seed, const PreimageQuery &q, const SolverConfig &cfg);
Point2 refine_direct(Point2 seed, const PreimageQuery &q, const SolverConfig &cfg);

// max_i |f_i(x, y) - target_i| / max(a, b, 1), with f evaluated exactly at
// the binary values of x and y.
double preimage_residual(const PreimageQuery &q, double x, double y);

// Throws SolverFailure when neither stage reaches the tolerance.
PreimageResult preimage(const PreimageQuery &q, const SolverConfig &cfg = {});

} // namespace qatlas
