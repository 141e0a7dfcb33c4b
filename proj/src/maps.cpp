#include "quadrant/maps.hpp"

#include "quadrant/errors.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace qatlas {

namespace {

// cos(theta) * sin(theta), never negative.
double cos_sin(double c, double s) { return std::max(0.0, c * s); }

void require_open_strip(double theta, const char *who) {
  if (!(theta > 0.0 && theta < kHalfPi))
    throw DomainError(std::string(who) + ": theta must lie strictly inside (0, pi/2)");
}

struct CosSin {
  double c;
  double s;
};

// Above pi/4 the pair is taken from the reflected angle, which is exact by
// Sterbenz; this makes cos vanish exactly at theta == kHalfPi.
CosSin trig(double theta) {
  if (theta > kPi / 4) {
    const double r = kHalfPi - theta;
    return {std::sin(r), std::cos(r)};
  }
  return {std::cos(theta), std::sin(theta)};
}

double xi(double y, double B) { return std::sqrt(B * B - std::min(y * y, B * B)); }

} // namespace

Point3 eval_g(Point2 p) {
  const double x = p.u, y = p.v;
  if (!(x >= 0.0))
    throw DomainError("eval_g: first coordinate must be non-negative");
  const double x2 = x * x, x3 = x2 * x;
  return {x * y * y + x2 * y - y - 1.0, x * std::sqrt(x) * y, x3 * y + x * y - x - 1.0};
}

Point2 eval_h(Point3 p) { return {p.x * p.x + p.y * p.y, p.y * p.y + p.z * p.z}; }

Point2 eval_psi(ParamPoint p) {
  require_open_strip(p.theta, "eval_psi");
  const auto [c, s] = trig(p.theta);
  return {s / c, (c + s + p.rho * c * s) * c * c / s};
}

Point3 eval_phi(ParamPoint p) {
  const double r = p.rho;
  const auto [c, s] = trig(p.theta);
  const double c2 = c * c, c4 = c2 * c2, c5 = c4 * c;
  const double s2 = s * s, s4 = s2 * s2;
  const double d = c - s;
  const double phi1 = c * s * d * d + r * (2.0 * c4 * s + c * s4 + c5) + r * r * c5 * s;
  const double phi2 = std::sqrt(cos_sin(c, s)) * (c + s + r * c * s);
  const double phi3 = r * s;
  return {phi1, phi2, phi3};
}

double eval_xi1(double /*x*/, double y, double B) { return xi(y, B); }
double eval_xi2(double y, double /*z*/, double B) { return xi(y, B); }

Point3 eval_zeta1(Point3 p, double B) { return {p.x, p.y, p.z - eval_xi1(p.x, p.y, B)}; }
// xi2 takes (y, z) in that order; the graph x = xi2(y, z) is what gets flattened.
Point3 eval_zeta2(Point3 p, double B) { return {p.z, p.y, p.x - eval_xi2(p.y, p.z, B)}; }

double eval_mu(double theta) {
  const double t = 4.0 * theta / kPi - 1.0;
  return t * t;
}

Point2 objective_F(ParamPoint p) {
  const double r = p.rho;
  const auto [c, s] = trig(p.theta);
  const Point3 phi = eval_phi(p);
  // phi2^2 written without the square root.
  const double w = cos_sin(c, s);
  const double L = c + s + r * c * s;
  const double phi2_sq = w * L * L;
  return {phi.x * phi.x + phi2_sq, phi2_sq + phi.z * phi.z};
}

Jacobian2 jacobian_F(ParamPoint p) {
  require_open_strip(p.theta, "jacobian_F");
  const double r = p.rho;
  const auto [c, s] = trig(p.theta);
  const double c2 = c * c, c3 = c2 * c, c4 = c2 * c2, c5 = c4 * c, c6 = c3 * c3;
  const double s2 = s * s, s3 = s2 * s, s4 = s2 * s2, s5 = s4 * s;

  const Point3 phi = eval_phi(p);
  const double w = c * s;
  const double dw = c2 - s2;
  const double L = c + s + r * w;

  const double dphi1_drho = 2.0 * c4 * s + c * s4 + c5 + 2.0 * r * c5 * s;
  const double dphi1_dtheta = dw * (1.0 - 4.0 * w) +
                              r * (2.0 * c5 - 8.0 * c3 * s2 - s5 + 4.0 * c2 * s3 - 5.0 * c4 * s) +
                              r * r * (c6 - 5.0 * c4 * s2);

  const double dP_drho = 2.0 * w * w * L;
  const double dP_dtheta = dw * L * L + 2.0 * w * L * (c - s + r * dw);

  const double dphi3_drho = s;
  const double dphi3_dtheta = r * c;

  return {2.0 * phi.x * dphi1_drho + dP_drho, 2.0 * phi.x * dphi1_dtheta + dP_dtheta,
          dP_drho + 2.0 * phi.z * dphi3_drho, dP_dtheta + 2.0 * phi.z * dphi3_dtheta};
}

} // namespace qatlas
