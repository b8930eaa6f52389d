#pragma once

#include <vector>

#include "icf/grid.hpp"
#include "icf/spaceform.hpp"
#include "icf/speed.hpp"

namespace icf {

enum class Backend { serial, openmp };
Backend default_backend();

/// Centered second-order partials and sigma-covariant Hessian of u on the
/// grid. Pole closure: ghost rows copy the row across the pole with
/// longitude shifted by half a turn.
struct DerivField {
  std::vector<double> du_theta, du_phi;
  std::vector<double> hess_tt, hess_tp, hess_pp;
};
DerivField differentiate(const SphericalGrid& grid, const std::vector<double>& u);

/// All extrinsic geometry of the radial graph at every node. lambda1 <=
/// lambda2 always; ties below roundoff are exact umbilics.
struct CurvatureField {
  std::vector<double> g_tt, g_tp, g_pp;
  std::vector<double> v;
  std::vector<double> h_tt, h_tp, h_pt, h_pp;
  std::vector<double> lambda1, lambda2;
  std::vector<double> F;
  std::vector<double> chi;
};

/// Reference curvature computation (straightforward per-node evaluation,
/// Weingarten eigenvalues via the symmetrized similar matrix). Throws
/// RadialDomainError / ConeViolation after the sweep if any node violated.
CurvatureField compute_curvature(const SpaceForm& sf, const SpeedFunction& f,
                                 const SurfaceState& state, Backend backend = default_backend());

/// Same sweep without the cone check, for inspecting surfaces that may be
/// inadmissible (F entries are raw evaluations and may be non-finite there).
CurvatureField compute_curvature_unchecked(const SpaceForm& sf, const SpeedFunction& f,
                                           const SurfaceState& state,
                                           Backend backend = default_backend());

struct SurfaceIntegrals {
  double area;            // |M|
  double asq_integral;    // int |A_traceless|^2 dmu, |.|^2 = (l1-l2)^2/2
  double f_pow_integral;  // int F^(1-alpha) dmu
};
SurfaceIntegrals area_and_integrals(const SpaceForm& sf, const SurfaceState& state,
                                    const CurvatureField& field, double alpha);

/// Fused stepping kernel: fills rhs = v F^(-alpha) and accumulates the
/// unscaled parabolic stability bound
///   min over nodes of  dl^2 / (alpha F^(-alpha-1) (dF/dl1 + dF/dl2)),
/// dl = s_kappa(u) min(dtheta, sin(theta) dphi) / v. Status flags instead of
/// exceptions so the sweep can run inside a parallel region.
struct FlowKernelResult {
  bool domain_violation = false;
  bool cone_violation = false;
  bool nonfinite = false;
  double min_dt_unscaled = 0.0;
  bool ok() const { return !domain_violation && !cone_violation && !nonfinite; }
};
FlowKernelResult flow_rhs(const SpaceForm& sf, const SpeedFunction& f, double alpha,
                          const SurfaceState& state, std::vector<double>& rhs_out,
                          Backend backend = default_backend());

}  // namespace icf
