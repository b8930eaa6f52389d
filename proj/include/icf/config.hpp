#pragma once

#include <string>

#include "icf/counterexample.hpp"
#include "icf/stepper.hpp"

namespace icf {

enum class RunMode { flow, counterexample, validate };

/// Parsed, validated run configuration. Unknown keys in the file are hard
/// errors; every error message carries the section.key path.
struct RunSpec {
  RunMode mode = RunMode::flow;
  int kappa = 0;
  std::string speed = "mean_curvature";
  double alpha = 1.0;

  // initial surface descriptor
  std::string surface = "sphere";  // sphere | perturbed_sphere | shifted_graph
  double rho0 = 1.0;
  double amplitude = 0.0;
  std::string harmonic = "cos_sq_theta";
  std::string fbar = "quadrupole";
  double shift = 6.0;
  double eps0 = 0.1;

  int n_theta = 32, n_phi = 64;

  double t_end = 1.0;
  double cfl_safety = 0.2;
  long max_steps = 5000000;
  double record_every = 0.05;
  std::string out_dir = "out";
};

RunSpec parse_config(const std::string& path);

/// Radial profile for perturbed spheres: "cos_sq_theta" (cos^2 theta),
/// "cos_theta", "cos2phi_sin2theta". Throws ConfigError for unknown names.
double harmonic_value(const std::string& name, double theta, double phi);

SurfaceState build_initial_surface(const RunSpec& spec);
FlowConfig to_flow_config(const RunSpec& spec);
CounterexampleConfig to_counterexample_config(const RunSpec& spec);

}  // namespace icf
