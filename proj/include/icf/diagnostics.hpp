#pragma once

#include <iosfwd>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "icf/geometry.hpp"

namespace icf {

/// One time slice of the scalar summaries the flow theory quantifies.
/// Fields that do not apply to the current space form stay unset and are
/// emitted as empty CSV cells.
struct DiagnosticsRecord {
  double t = 0.0;
  std::optional<double> tau;  // rescaled time, kappa=0 runs only
  double max_G = 0.0;         // sup (l1-l2)^2/(l1+l2)^2
  double beta = 1.0;          // sup l2/l1
  double min_F = 0.0, max_F = 0.0;
  double min_chi = 0.0;
  double area = 0.0;
  double int_Asq = 0.0;
  double Q = 0.0;  // -|M| int |A_traceless|^2
  double max_u = 0.0, min_u = 0.0;
  // hyperbolic extras
  std::optional<double> max_lam_dev;   // sup |lambda_i - 1|
  std::optional<double> max_coth_dev;  // sup (coth u - 1)
  std::optional<double> max_H_dev;     // sup |H - 2|
  // Euclidean extras (rescaled by the companion sphere radius)
  std::optional<double> lam_tilde_min, lam_tilde_max;
  std::optional<double> F_tilde_min, F_tilde_max;
};

/// Fills a record from one curvature pass. For kappa=0, rbar supplies the
/// companion sphere radius seed for the rescaled quantities.
DiagnosticsRecord snapshot_diagnostics(const SpaceForm& sf, const SpeedFunction& f, double alpha,
                                       const SurfaceState& state,
                                       std::optional<double> rbar = std::nullopt,
                                       Backend backend = default_backend());

struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r2 = 0.0;
  int n = 0;
};
LinearFit linear_fit(std::span<const double> x, std::span<const double> y);

/// Least-squares slope of log(value) against t over the trailing fraction of
/// the series. Values at or below 1e-13 are dropped as numerical floor;
/// fewer than 8 surviving samples raises InsufficientData.
struct FitResult {
  double rate = 0.0;
  double goodness = 0.0;
  int n_used = 0;
};
FitResult fit_decay_rate(std::span<const std::pair<double, double>> series,
                         double trailing_fraction);

/// Residuals of the evolution identities between two consecutive snapshots.
/// area_growth_*: relative mismatch of d|M|/dt against int F^(-alpha) H dmu,
/// with the right side taken at the earlier snapshot (fwd, first order in dt)
/// or averaged over both (sym, second order). q_fwd (F = H only) is the
/// finite-difference dQ/dt minus the two area-integral terms of the Q
/// evolution; the omitted gradient term is exactly its budget.
struct ResidualReport {
  double dt = 0.0;
  double area_growth_fwd = 0.0;
  double area_growth_sym = 0.0;
  std::optional<double> q_fwd;
};
ResidualReport identity_residuals(const SpaceForm& sf, const SpeedFunction& f, double alpha,
                                  const SurfaceState& prev, const SurfaceState& next);

/// Post-hoc rescaling of a Euclidean run: utilde = u/rho(t,rbar),
/// lambda_tilde = rho lambda, F_tilde = rho F, with tau from trapezoid
/// integration of d tau/dt = rho^(alpha-1).
struct RescaledRecord {
  double tau = 0.0;
  double u_min = 0.0, u_max = 0.0;
  double lam_min = 0.0, lam_max = 0.0;
  double F_min = 0.0, F_max = 0.0;
  double max_G = 0.0;
};
std::vector<RescaledRecord> rescaled_euclid(std::span<const SurfaceState> states,
                                            const SpeedFunction& f, double alpha, double rbar,
                                            Backend backend = default_backend());

/// CSV time series with the fixed header
/// t,tau,max_G,beta,min_F,max_F,min_chi,area,int_Asq,Q,max_u,min_u,max_lam_dev,max_coth_dev,max_H_dev
/// at 12 significant digits; unset fields are empty.
void write_csv(std::ostream& os, std::span<const DiagnosticsRecord> records);

std::string format_double(double v);  // 12 significant digits

}  // namespace icf
