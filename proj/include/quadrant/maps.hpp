#pragma once

#include <numbers>

namespace qatlas {

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kHalfPi = std::numbers::pi / 2;

struct Point2 {
  double u = 0.0;
  double v = 0.0;
};

struct Point3 {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;
};

// (rho, theta) in the closed strip [0, inf) x [0, pi/2], radians.
struct ParamPoint {
  double rho = 0.0;
  double theta = 0.0;
};

// Partials of F(rho, theta) = h(phi(rho, theta)).
struct Jacobian2 {
  double d1_drho = 0.0;
  double d1_dtheta = 0.0;
  double d2_drho = 0.0;
  double d2_dtheta = 0.0;
};

// g(x, y) = (xy^2 + x^2y - y - 1, x^(3/2) y, x^3y + xy - x - 1) on the closed
// quadrant. Throws DomainError for p.u < 0.
Point3 eval_g(Point2 p);

// h(x, y, z) = (x^2 + y^2, y^2 + z^2)
Point2 eval_h(Point3 p);

// psi(rho, theta) = (tan theta, (cos + sin + rho cos sin) cos^2 / sin).
// Requires 0 < theta < pi/2 strictly.
Point2 eval_psi(ParamPoint p);

// Defined on the whole closed strip; the factor sqrt(cos sin) is clamped at 0
// before the root.
Point3 eval_phi(ParamPoint p);

// sqrt(B^2 - min(y^2, B^2)); xi1 takes (x, y), xi2 takes (y, z). Both depend
// only on the y coordinate.
double eval_xi1(double x, double y, double B);
double eval_xi2(double y, double z, double B);

// zeta1(x, y, z) = (x, y, z - xi1(x, y))
Point3 eval_zeta1(Point3 p, double B);
// zeta2(x, y, z) = (z, y, x - xi2(y, z))
Point3 eval_zeta2(Point3 p, double B);

// (4 theta / pi - 1)^2
double eval_mu(double theta);

// F(rho, theta) = (phi1^2 + phi2^2, phi2^2 + phi3^2)
Point2 objective_F(ParamPoint p);

// Analytic partials of objective_F; requires 0 < theta < pi/2.
Jacobian2 jacobian_F(ParamPoint p);

} // namespace qatlas
