#include "icf/reference.hpp"

#include <algorithm>
#include <cmath>

namespace icf {

double euclid_radius(double alpha, double rho0, double t) {
  if (alpha == 1.0) return rho0 * std::exp(0.5 * t);
  const double base = (1.0 - alpha) * std::pow(2.0, -alpha) * t + std::pow(rho0, 1.0 - alpha);
  return std::pow(base, 1.0 / (1.0 - alpha));
}

double integrate_scalar_ode(const std::function<double(double, double)>& f, double t0, double y0,
                            double t1, double rel_tol, double abs_tol) {
  // Cash-Karp embedded 4(5) pair.
  static constexpr double a2 = 1.0 / 5, a3 = 3.0 / 10, a4 = 3.0 / 5, a5 = 1.0, a6 = 7.0 / 8;
  static constexpr double b21 = 1.0 / 5;
  static constexpr double b31 = 3.0 / 40, b32 = 9.0 / 40;
  static constexpr double b41 = 3.0 / 10, b42 = -9.0 / 10, b43 = 6.0 / 5;
  static constexpr double b51 = -11.0 / 54, b52 = 5.0 / 2, b53 = -70.0 / 27, b54 = 35.0 / 27;
  static constexpr double b61 = 1631.0 / 55296, b62 = 175.0 / 512, b63 = 575.0 / 13824,
                          b64 = 44275.0 / 110592, b65 = 253.0 / 4096;
  static constexpr double c1 = 37.0 / 378, c3 = 250.0 / 621, c4 = 125.0 / 594, c6 = 512.0 / 1771;
  static constexpr double d1 = c1 - 2825.0 / 27648, d3 = c3 - 18575.0 / 48384,
                          d4 = c4 - 13525.0 / 55296, d5 = -277.0 / 14336, d6 = c6 - 0.25;

  if (t1 == t0) return y0;
  double t = t0, y = y0;
  double h = (t1 - t0) / 64.0;
  const double span = t1 - t0;
  int guard = 0;
  while (t < t1 && guard++ < 20000000) {
    h = std::min(h, t1 - t);
    const double k1 = f(t, y);
    const double k2 = f(t + a2 * h, y + h * b21 * k1);
    const double k3 = f(t + a3 * h, y + h * (b31 * k1 + b32 * k2));
    const double k4 = f(t + a4 * h, y + h * (b41 * k1 + b42 * k2 + b43 * k3));
    const double k5 = f(t + a5 * h, y + h * (b51 * k1 + b52 * k2 + b53 * k3 + b54 * k4));
    const double k6 =
        f(t + a6 * h, y + h * (b61 * k1 + b62 * k2 + b63 * k3 + b64 * k4 + b65 * k5));
    const double dy = h * (c1 * k1 + c3 * k3 + c4 * k4 + c6 * k6);
    const double err = std::abs(h * (d1 * k1 + d3 * k3 + d4 * k4 + d5 * k5 + d6 * k6));
    const double tol = abs_tol + rel_tol * std::max(std::abs(y), std::abs(y + dy));
    if (err <= tol || h <= 1e-14 * span) {
      t += h;
      y += dy;
    }
    const double scale = err > 0.0 ? 0.9 * std::pow(tol / err, 0.2) : 5.0;
    h *= std::clamp(scale, 0.2, 5.0);
  }
  return y;
}

double hyperbolic_radius(double alpha, double rho0, double t) {
  if (t == 0.0) return rho0;
  const double c = std::pow(2.0, -alpha);
  return integrate_scalar_ode(
      [alpha, c](double, double r) { return c * std::pow(std::tanh(r), alpha); }, 0.0, rho0, t);
}

double spherical_horizon_time(double rho0) { return -2.0 * std::log(std::sin(rho0)); }

double spherical_radius(double rho0, double t) {
  if (t == 0.0) return rho0;
  const double T = spherical_horizon_time(rho0);
  if (t >= T - 1e-12 * std::max(1.0, std::abs(T)))
    throw PastEquatorError("spherical_radius: t >= horizon time " + std::to_string(T));
  return std::asin(std::min(std::sin(rho0) * std::exp(0.5 * t), 1.0));
}

double SphereSolution::radius(double t) const {
  switch (kappa) {
    case 0:  return euclid_radius(alpha, rho0, t);
    case 1:  return spherical_radius(rho0, t);
    default: return hyperbolic_radius(alpha, rho0, t);
  }
}

}  // namespace icf
