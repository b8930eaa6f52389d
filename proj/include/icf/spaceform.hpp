#pragma once

#include <cmath>
#include <limits>

#include "icf/errors.hpp"

namespace icf {

/// Ambient space form R^3(kappa): Euclidean space (kappa=0), the round
/// 3-sphere (kappa=+1) or hyperbolic space (kappa=-1), in the warped
/// product model dr^2 + s_kappa^2(r) g_{S^2}.
///
/// The radial domain is (0, inf) for kappa in {0,-1} and (0, pi) for
/// kappa=+1. Domain checks are strict with no epsilon slack; callers that
/// want tolerance clamp before calling.
class SpaceForm {
 public:
  explicit SpaceForm(int kappa) : kappa_(kappa) {
    if (kappa != 0 && kappa != 1 && kappa != -1)
      throw std::invalid_argument("SpaceForm: kappa must be one of {0,+1,-1}");
  }

  int kappa() const { return kappa_; }

  /// Upper end of the valid radial domain.
  double domain_max() const {
    return kappa_ == 1 ? M_PI : std::numeric_limits<double>::infinity();
  }

  bool in_domain(double r) const { return r > 0.0 && r < domain_max(); }

  /// Warp function s_kappa(r): r, sin r or sinh r.
  double warp(double r) const {
    check_domain(r);
    switch (kappa_) {
      case 0:  return r;
      case 1:  return std::sin(r);
      default: return std::sinh(r);
    }
  }

  /// Derivative s'_kappa(r): 1, cos r or cosh r.
  double warp_prime(double r) const {
    check_domain(r);
    switch (kappa_) {
      case 0:  return 1.0;
      case 1:  return std::cos(r);
      default: return std::cosh(r);
    }
  }

  /// Principal curvature s'_kappa(rho)/s_kappa(rho) of the geodesic sphere
  /// of radius rho. Positive on the admissible range, which for kappa=+1
  /// is rho < pi/2.
  double geodesic_sphere_curvature(double rho) const {
    check_domain(rho);
    if (kappa_ == 1 && rho >= M_PI / 2)
      throw RadialDomainError("geodesic_sphere_curvature: rho >= pi/2 in S^3");
    switch (kappa_) {
      case 0:  return 1.0 / rho;
      case 1:  return std::cos(rho) / std::sin(rho);
      default: return std::cosh(rho) / std::sinh(rho);
    }
  }

 private:
  void check_domain(double r) const {
    if (!(r > 0.0) || !(r < domain_max()))
      throw RadialDomainError("radial coordinate " + std::to_string(r) +
                              " outside domain of kappa=" + std::to_string(kappa_));
  }

  int kappa_;
};

}  // namespace icf
