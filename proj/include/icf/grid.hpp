#pragma once

#include <cstddef>
#include <iosfwd>
#include <memory>
#include <vector>

namespace icf {

/// Equiangular latitude-longitude grid on S^2 with half-offset colatitudes
/// (no node sits on a pole): theta_i = (i+1/2) pi/n_theta, phi_j = 2 pi j/n_phi.
///
/// Node quadrature weights are the cell integrals of the round area element,
/// (cos theta_{i-1/2} - cos theta_{i+1/2}) * dphi, so they sum to 4 pi exactly
/// up to roundoff. n_phi must be even so rows can be continued across the
/// poles by a half-turn shift in longitude.
class SphericalGrid {
 public:
  SphericalGrid(int n_theta, int n_phi);

  int n_theta() const { return n_theta_; }
  int n_phi() const { return n_phi_; }
  std::size_t size() const { return static_cast<std::size_t>(n_theta_) * n_phi_; }
  std::size_t index(int i, int j) const { return static_cast<std::size_t>(i) * n_phi_ + j; }

  double dtheta() const { return dtheta_; }
  double dphi() const { return dphi_; }
  double theta(int i) const { return theta_[i]; }
  double phi(int j) const { return dphi_ * j; }

  const std::vector<double>& thetas() const { return theta_; }
  const std::vector<double>& sin_theta() const { return sin_theta_; }
  const std::vector<double>& cos_theta() const { return cos_theta_; }
  /// Cell-integrated sin(theta) per row; node weight = row_weight(i) * dphi().
  double row_weight(int i) const { return row_weight_[i]; }
  double node_weight(int i) const { return row_weight_[i] * dphi_; }

 private:
  int n_theta_, n_phi_;
  double dtheta_, dphi_;
  std::vector<double> theta_, sin_theta_, cos_theta_, row_weight_;
};

/// A star-shaped surface as a radial graph u(theta,phi) over S^2 at flow time t.
struct SurfaceState {
  std::shared_ptr<const SphericalGrid> grid;
  std::vector<double> u;  // row-major, theta-major
  double t = 0.0;
};

SurfaceState make_constant_state(std::shared_ptr<const SphericalGrid> grid, double rho0);

/// Plain-text snapshot: header "kappa n_theta n_phi t", then n_theta rows of
/// n_phi values at full double precision.
void write_snapshot(std::ostream& os, int kappa, const SurfaceState& state);
SurfaceState read_snapshot(std::istream& is, int* kappa_out);

/// Fixed-order pairwise sum; bit-stable regardless of worker count.
double pairwise_sum(const double* data, std::size_t n);

}  // namespace icf
