#pragma once

#include <string_view>
#include <vector>

#include "icf/diagnostics.hpp"
#include "icf/geometry.hpp"

namespace icf {

enum class TerminationReason { t_end, max_steps, blowup, cone_violation, equator_proximity };
std::string_view to_string(TerminationReason r);

struct FlowConfig {
  SpaceForm sf{0};
  std::string speed = "mean_curvature";
  double alpha = 1.0;
  SurfaceState initial;
  double t_end = 1.0;
  double cfl_safety = 0.2;  // fraction of the stability bound actually taken
  double cfl_denom = 4.0;   // constant in the parabolic bound dl^2/(denom * diffusivity)
  long max_steps = 5000000;
  double record_every = 0.05;
  Backend backend = default_backend();
};

/// Throws ConfigError on invalid combinations (alpha out of range, alpha != 1
/// with kappa=+1, nonpositive t_end, ...).
void validate(const FlowConfig& cfg);

/// Right-hand side of the scalar graph flow: du/dt = v F^(-alpha) per node.
std::vector<double> rhs(const SpaceForm& sf, const SpeedFunction& f, double alpha,
                        const SurfaceState& state, Backend backend = default_backend());

/// Explicit stability step: cfl_safety * min over nodes of
/// dl^2 / (denom * alpha F^(-alpha-1) (dF/dl1 + dF/dl2)).
double stable_dt(const SpaceForm& sf, const SpeedFunction& f, double alpha,
                 const SurfaceState& state, double cfl_safety = 0.2, double denom = 4.0,
                 Backend backend = default_backend());

struct RunResult {
  std::vector<SurfaceState> snapshots;       // states at the record cadence
  std::vector<DiagnosticsRecord> records;    // one per snapshot
  TerminationReason reason = TerminationReason::t_end;
  long steps = 0;
  double wall_seconds = 0.0;
  double t_final = 0.0;
};

/// Explicit midpoint (two-stage) integration of the graph flow with adaptive
/// stability steps, diagnostics on the record cadence and labeled
/// termination. For kappa=+1 the run stops once max u comes within 1e-3 of
/// the equator, where the speed degenerates.
RunResult run(const FlowConfig& cfg);

}  // namespace icf
