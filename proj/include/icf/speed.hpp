#pragma once

#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "icf/errors.hpp"

namespace icf {

/// Identifies the built-in speed functions so hot kernels can dispatch on a
/// compile-time functor instead of an indirect call.
enum class SpeedKind {
  mean_curvature,
  power_mean_m1,
  power_mean_p2,
  power_mean_p3,
  geometric_mean,
  sum_squares_ratio,
  custom,
};

/// A curvature speed function F(lambda1, lambda2): smooth, symmetric,
/// strictly monotone, homogeneous of degree one and normalized F(1,1)=2.
/// Gradients are analytic; finite differences are test oracles only.
struct SpeedFunction {
  std::string name;
  SpeedKind kind = SpeedKind::custom;
  double (*eval_fn)(double, double) = nullptr;
  void (*grad_fn)(double, double, double*, double*) = nullptr;
  /// False only for mean curvature, which admits merely mean-convex data.
  bool requires_full_convexity = true;
  /// Largest admissible ratio max(l1,l2)/min(l1,l2); infinity when the
  /// whole positive quadrant is admissible.
  double pinch_limit = 0.0;

  bool in_cone(double l1, double l2) const;
};

/// Evaluates F. Throws ConeViolation outside the admissible cone; this is
/// how loss of convexity surfaces during a run.
double eval_F(const SpeedFunction& f, double lambda1, double lambda2);

/// Analytic gradient (dF/dl1, dF/dl2). Same cone checks as eval_F.
std::pair<double, double> grad_F(const SpeedFunction& f, double lambda1, double lambda2);

/// Name lookup in the built-in registry. Throws ConfigError for unknown names.
const SpeedFunction& speed_by_name(std::string_view name);

const std::vector<SpeedFunction>& speed_registry();

/// Intentionally non-symmetric fixture (F = l1 + 2 l2) used to exercise the
/// validator's failure path. Not part of the registry.
const SpeedFunction& broken_asymmetric_fixture();

/// Axiom check over a sample set: symmetry, degree-one homogeneity
/// (k in {0.5, 2, 10}), normalization F(1,1)=2, strict monotonicity and
/// agreement of the analytic gradient with central differences.
struct ValidationReport {
  double max_symmetry_err = 0.0;
  double max_homogeneity_err = 0.0;
  double normalization_err = 0.0;
  double min_grad_component = 0.0;
  double max_grad_fd_rel_err = 0.0;
  bool passed = false;
  std::vector<std::string> violations;  // subset of {"symmetry","homogeneity","normalization","monotonicity","gradient"}
};

ValidationReport validate_assumption(const SpeedFunction& f,
                                     std::span<const std::pair<double, double>> samples);

/// Halton points (bases 2,3) mapped linearly into [lo,hi]^2 and filtered to
/// the admissible cone of f.
std::vector<std::pair<double, double>> halton_cone_samples(const SpeedFunction& f, int n,
                                                           double lo = 0.1, double hi = 10.0);

/// Validates the flow exponent: alpha in (0,1], and alpha = 1 when kappa=+1.
void check_flow_exponent(double alpha, int kappa);

}  // namespace icf
