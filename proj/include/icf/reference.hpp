#pragma once

#include <functional>

#include "icf/errors.hpp"

namespace icf {

/// Radius of the expanding sphere solution in R^3:
/// ((1-alpha) 2^(-alpha) t + rho0^(1-alpha))^(1/(1-alpha)), rho0 e^(t/2) for alpha=1.
double euclid_radius(double alpha, double rho0, double t);

/// Radius of the sphere solution in H^3, from adaptive integration of
/// d rho/dt = 2^(-alpha) tanh(rho)^alpha to relative tolerance 1e-10.
double hyperbolic_radius(double alpha, double rho0, double t);

/// Radius of the sphere solution in S^3 for alpha = 1:
/// arcsin(sin(rho0) e^(t/2)), valid for t < T = -2 ln sin(rho0).
/// Throws PastEquatorError at t >= T.
double spherical_radius(double rho0, double t);

/// Time at which the S^3 sphere solution reaches the equator.
double spherical_horizon_time(double rho0);

struct SphereSolution {
  int kappa;
  double alpha;
  double rho0;
  double radius(double t) const;
};

/// Adaptive embedded Cash-Karp 4(5) for scalar ODEs y' = f(t, y). Used for
/// the hyperbolic sphere solution and available to tests as an independent
/// integration route.
double integrate_scalar_ode(const std::function<double(double, double)>& f, double t0, double y0,
                            double t1, double rel_tol = 1e-10, double abs_tol = 1e-13);

}  // namespace icf
