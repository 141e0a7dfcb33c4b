#include "quadrant/preimage.hpp"

#include "quadrant/errors.hpp"
#include "quadrant/polynomial.hpp"
#include "quadrant/topology.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

namespace qatlas {

namespace {

const PolyMap2 &theorem_map() {
  static const PolyMap2 f = build_theorem_map();
  return f;
}

double sup_residual(Point2 value, const PreimageQuery &q) {
  const double r = std::max(std::abs(value.u - q.a), std::abs(value.v - q.b)) / q.scale();
  return std::isfinite(r) ? r : std::numeric_limits<double>::infinity();
}

// Solves [[a, b], [c, d]] x = rhs; false when the matrix is numerically singular.
bool solve2(double a, double b, double c, double d, double r1, double r2, double &x1, double &x2) {
  const double det = a * d - b * c;
  const double norm = std::max({std::abs(a * d), std::abs(b * c), std::numeric_limits<double>::min()});
  if (!std::isfinite(det) || std::abs(det) <= 1e-14 * norm)
    return false;
  x1 = (r1 * d - b * r2) / det;
  x2 = (a * r2 - c * r1) / det;
  return std::isfinite(x1) && std::isfinite(x2);
}

// f2 in its factored form (g1^2 + g2^2, g2^2 + g3^2); far less cancellation than
// the expanded polynomial once u or v is large.
struct F2Local {
  Point2 value;
  double a, b, c, d; // Jacobian rows
};

F2Local eval_f2_local(Point2 p) {
  const double u = p.u, v = p.v;
  const double g1 = v * (u * v + u * u - 1.0) - 1.0;
  const double g3 = u * (u * u * v + v - 1.0) - 1.0;
  const double g2sq = u * u * u * v * v;
  F2Local out;
  out.value = {g1 * g1 + g2sq, g2sq + g3 * g3};
  const double dg2_du = 3.0 * u * u * v * v, dg2_dv = 2.0 * u * u * u * v;
  out.a = 2.0 * g1 * (v * v + 2.0 * u * v) + dg2_du;
  out.b = 2.0 * g1 * (2.0 * u * v + u * u - 1.0) + dg2_dv;
  out.c = 2.0 * g3 * (3.0 * u * u * v + v - 1.0) + dg2_du;
  out.d = 2.0 * g3 * (u * u * u + u) + dg2_dv;
  return out;
}

constexpr double kPolishFactor = 1e-3;
constexpr std::size_t kAcceptWindow = 5;

double clamp_theta(double theta) { return std::clamp(theta, kThetaMargin, kHalfPi - kThetaMargin); }

} // namespace

void SolverConfig::validate() const {
  if (!(residual_tol > 0.0) || max_newton_iters < 1 || grid_rho < 1 || grid_theta < 1 || max_backtracks < 1)
    throw DomainError("solver config: tolerance and counts must be positive");
}

void PreimageQuery::validate() const {
  if (!(a > 0.0) || !(b > 0.0) || !std::isfinite(a) || !std::isfinite(b))
    throw DomainError("preimage target must lie in the open quadrant");
}

double PreimageQuery::scale() const { return std::max({a, b, 1.0}); }

std::string_view to_string(SolveStage s) {
  return s == SolveStage::SurfaceSeeded ? "surface-seeded" : "direct-fallback";
}

double search_radius(const PreimageQuery &q) {
  return make_tube(std::sqrt(std::min(q.a, q.b)), std::sqrt(std::max(q.a, q.b)), DiscVariant::D1).M;
}

std::vector<ParamPoint> seed_lattice(const PreimageQuery &q, const SolverConfig &cfg) {
  const double M = search_radius(q);

  std::vector<double> rhos{0.0};
  constexpr double kDecades = 6.0;
  for (int i = 1; i < cfg.grid_rho; ++i) {
    const double frac = cfg.grid_rho == 2 ? 1.0 : static_cast<double>(i - 1) / (cfg.grid_rho - 2);
    rhos.push_back(M * std::pow(10.0, -kDecades * (1.0 - frac)));
  }

  const double lo = kThetaMargin, hi = kHalfPi - kThetaMargin;
  std::vector<double> thetas;
  if (cfg.grid_theta == 1) {
    thetas.push_back(kPi / 4);
  } else {
    const double step = (hi - lo) / (cfg.grid_theta - 1);
    for (int j = 0; j < cfg.grid_theta; ++j)
      thetas.push_back(j + 1 == cfg.grid_theta ? hi : lo + j * step);
    if (std::min(q.a, q.b) <= kBoundaryTarget) {
      // Three extra points per base point, split between the two end cells.
      const int extra = (3 * cfg.grid_theta + 1) / 2;
      for (int k = 0; k < extra; ++k) {
        const double offset = kThetaMargin * std::pow(step / kThetaMargin, static_cast<double>(k + 1) / (extra + 1));
        thetas.push_back(lo + offset);
        thetas.push_back(hi - offset);
      }
      std::sort(thetas.begin(), thetas.end());
      thetas.erase(std::unique(thetas.begin(), thetas.end()), thetas.end());
    }
  }

  std::vector<ParamPoint> lattice;
  lattice.reserve(rhos.size() * thetas.size());
  for (double r : rhos)
    for (double t : thetas)
      lattice.push_back({r, t});
  return lattice;
}

bool newton_surface(const PreimageQuery &q, const SolverConfig &cfg, ParamPoint seed, double rho_max,
                    SurfaceRoot &out) {
  ParamPoint x{std::clamp(seed.rho, 0.0, rho_max), clamp_theta(seed.theta)};
  Point2 fx = objective_F(x);
  double res = sup_residual(fx, q);

  for (int iter = 0;; ++iter) {
    out.point = x;
    out.residual = res;
    out.newton_iters = iter;
    if (res <= cfg.residual_tol)
      return true;
    if (iter == cfg.max_newton_iters)
      return false;

    const Jacobian2 J = jacobian_F(x);
    double d_rho = 0.0, d_theta = 0.0;
    if (!solve2(J.d1_drho, J.d1_dtheta, J.d2_drho, J.d2_dtheta, q.a - fx.u, q.b - fx.v, d_rho, d_theta))
      return false;

    double lambda = 1.0;
    bool accepted = false;
    for (int k = 0; k < cfg.max_backtracks; ++k, lambda *= 0.5) {
      const ParamPoint trial{std::clamp(x.rho + lambda * d_rho, 0.0, rho_max),
                             clamp_theta(x.theta + lambda * d_theta)};
      const Point2 ft = objective_F(trial);
      const double rt = sup_residual(ft, q);
      if (rt < res) {
        x = trial;
        fx = ft;
        res = rt;
        accepted = true;
        break;
      }
    }
    if (!accepted)
      return false;
  }
}

SurfaceRoot solve_surface_from(const PreimageQuery &q, const SolverConfig &cfg, int first_seed) {
  q.validate();
  cfg.validate();
  const double M = search_radius(q);
  const auto lattice = seed_lattice(q, cfg);
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t k = static_cast<std::size_t>(std::max(first_seed, 0)); k < lattice.size(); ++k) {
    SurfaceRoot root;
    const bool converged = newton_surface(q, cfg, lattice[k], M, root);
    best = std::min(best, root.residual);
    if (converged) {
      root.seed_index = static_cast<int>(k);
      return root;
    }
  }
  throw SolverFailure("solve_surface: no seed converged", best);
}

ParamPoint solve_surface(const PreimageQuery &q, const SolverConfig &cfg) {
  return solve_surface_from(q, cfg, 0).point;
}

Point2 lift_to_quadrant(ParamPoint p) {
  if (!(p.theta >= kThetaMargin && p.theta <= kHalfPi - kThetaMargin))
    throw DomainError("lift_to_quadrant: theta must stay inside the margined strip");
  return eval_psi(p);
}

RefineOutcome refine_direct_detailed(Point2 seed, const PreimageQuery &q, const SolverConfig &cfg) {
  q.validate();
  cfg.validate();

  Point2 x{std::max(seed.u, 0.0), std::max(seed.v, 0.0)};
  F2Local local = eval_f2_local(x);
  double res = sup_residual(local.value, q);
  Point2 best = x;
  double best_res = res;

  // Nonmonotone acceptance: a trial must beat the worst of the last few
  // accepted residuals. Near a fold of f2 strict decrease traps the iterate.
  std::array<double, kAcceptWindow> recent;
  recent.fill(res);

  // Iterates past residual_tol towards a polish target while steps still help.
  const double polish = cfg.residual_tol * kPolishFactor;
  int iter = 0;
  for (;; ++iter) {
    if (best_res <= polish || iter == cfg.max_newton_iters)
      break;

    const double reference = *std::max_element(recent.begin(), recent.end());
    const double r1 = q.a - local.value.u, r2 = q.b - local.value.v;
    auto try_step = [&](double du, double dv) {
      const Point2 trial{std::max(0.0, x.u + du), std::max(0.0, x.v + dv)};
      const F2Local lt = eval_f2_local(trial);
      const double rt = sup_residual(lt.value, q);
      if (!(rt < reference))
        return false;
      x = trial;
      local = lt;
      res = rt;
      return true;
    };

    bool accepted = false;
    double du = 0.0, dv = 0.0;
    if (solve2(local.a, local.b, local.c, local.d, r1, r2, du, dv)) {
      double lambda = 1.0;
      for (int k = 0; k < cfg.max_backtracks && !accepted; ++k, lambda *= 0.5)
        accepted = try_step(lambda * du, lambda * dv);
    }
    if (!accepted) {
      // Levenberg-Marquardt steps when the Newton direction is useless.
      const double jtj11 = local.a * local.a + local.c * local.c;
      const double jtj12 = local.a * local.b + local.c * local.d;
      const double jtj22 = local.b * local.b + local.d * local.d;
      const double g1 = local.a * r1 + local.c * r2, g2 = local.b * r1 + local.d * r2;
      double mu = 1e-12 * std::max({jtj11, jtj22, std::numeric_limits<double>::min()});
      for (int k = 0; k < cfg.max_backtracks && !accepted; ++k, mu *= 10.0)
        if (solve2(jtj11 + mu, jtj12, jtj12, jtj22 + mu, g1, g2, du, dv))
          accepted = try_step(du, dv);
    }
    if (!accepted)
      break;

    recent[static_cast<std::size_t>(iter) % kAcceptWindow] = res;
    if (res < best_res) {
      best = x;
      best_res = res;
    }
  }
  if (best_res <= cfg.residual_tol)
    return {best, best_res, iter};
  throw RefineFailure("refine_direct: Newton stalled above tolerance", best, best_res);
}

Point2 refine_direct(Point2 seed, const PreimageQuery &q, const SolverConfig &cfg) {
  return refine_direct_detailed(seed, q, cfg).point;
}

double preimage_residual(const PreimageQuery &q, double x, double y) {
  const auto &f = theorem_map();
  const mpq_class xq(x), yq(y);
  const mpq_class d1 = evaluate_exact(f.component1, xq, yq) - mpq_class(q.a);
  const mpq_class d2 = evaluate_exact(f.component2, xq, yq) - mpq_class(q.b);
  const double r = std::max(std::abs(d1.get_d()), std::abs(d2.get_d())) / q.scale();
  return std::isfinite(r) ? r : std::numeric_limits<double>::infinity();
}

namespace {

// Lifts a quadrant point through f1 and checks the final residual.
bool accept(const PreimageQuery &q, const SolverConfig &cfg, const RefineOutcome &refined, PreimageResult &out,
            double &best) {
  out.x = std::sqrt(refined.point.u);
  out.y = std::sqrt(refined.point.v);
  out.residual = preimage_residual(q, out.x, out.y);
  best = std::min(best, out.residual);
  return out.residual <= cfg.residual_tol;
}

} // namespace

PreimageResult preimage(const PreimageQuery &q, const SolverConfig &cfg) {
  q.validate();
  cfg.validate();
  const auto lattice = seed_lattice(q, cfg);
  const double M = search_radius(q);
  double best = std::numeric_limits<double>::infinity();
  PreimageResult result;

  // Stage 1: roots of h o phi, lifted by psi and polished on f2.
  for (std::size_t k = 0; k < lattice.size(); ++k) {
    SurfaceRoot root;
    const bool converged = newton_surface(q, cfg, lattice[k], M, root);
    best = std::min(best, root.residual);
    if (!converged)
      continue;
    try {
      const RefineOutcome refined = refine_direct_detailed(lift_to_quadrant(root.point), q, cfg);
      if (accept(q, cfg, refined, result, best)) {
        result.stage = SolveStage::SurfaceSeeded;
        result.newton_iters = root.newton_iters + refined.iterations;
        result.seed_index = static_cast<int>(k);
        return result;
      }
    } catch (const RefineFailure &e) {
      best = std::min(best, e.residual());
    }
  }

  // Stage 2: Newton on f2 straight from the lifted lattice.
  for (std::size_t k = 0; k < lattice.size(); ++k) {
    try {
      const RefineOutcome refined = refine_direct_detailed(lift_to_quadrant(lattice[k]), q, cfg);
      if (accept(q, cfg, refined, result, best)) {
        result.stage = SolveStage::DirectFallback;
        result.newton_iters = refined.iterations;
        result.seed_index = static_cast<int>(k);
        return result;
      }
    } catch (const RefineFailure &e) {
      best = std::min(best, e.residual());
    }
  }
  throw SolverFailure("preimage: no seed reached the residual tolerance", best);
}

} // namespace qatlas
