#include "icf/grid.hpp"

#include <cmath>
#include <istream>
#include <ostream>
#include <stdexcept>

namespace icf {

SphericalGrid::SphericalGrid(int n_theta, int n_phi) : n_theta_(n_theta), n_phi_(n_phi) {
  if (n_theta < 4 || n_phi < 4)
    throw std::invalid_argument("SphericalGrid: need n_theta >= 4 and n_phi >= 4");
  if (n_phi % 2 != 0)
    throw std::invalid_argument("SphericalGrid: n_phi must be even for across-pole ghosts");
  dtheta_ = M_PI / n_theta;
  dphi_ = 2.0 * M_PI / n_phi;
  theta_.resize(n_theta);
  sin_theta_.resize(n_theta);
  cos_theta_.resize(n_theta);
  row_weight_.resize(n_theta);
  for (int i = 0; i < n_theta; ++i) {
    theta_[i] = (i + 0.5) * dtheta_;
    sin_theta_[i] = std::sin(theta_[i]);
    cos_theta_[i] = std::cos(theta_[i]);
    row_weight_[i] = std::cos(i * dtheta_) - std::cos((i + 1) * dtheta_);
  }
}

SurfaceState make_constant_state(std::shared_ptr<const SphericalGrid> grid, double rho0) {
  SurfaceState s;
  s.u.assign(grid->size(), rho0);
  s.grid = std::move(grid);
  s.t = 0.0;
  return s;
}

void write_snapshot(std::ostream& os, int kappa, const SurfaceState& state) {
  const auto& g = *state.grid;
  os.precision(17);
  os << kappa << ' ' << g.n_theta() << ' ' << g.n_phi() << ' ' << state.t << '\n';
  for (int i = 0; i < g.n_theta(); ++i) {
    for (int j = 0; j < g.n_phi(); ++j) {
      if (j) os << ' ';
      os << state.u[g.index(i, j)];
    }
    os << '\n';
  }
}

SurfaceState read_snapshot(std::istream& is, int* kappa_out) {
  int kappa, nt, np;
  double t;
  if (!(is >> kappa >> nt >> np >> t))
    throw std::runtime_error("snapshot: malformed header");
  SurfaceState s;
  s.grid = std::make_shared<SphericalGrid>(nt, np);
  s.t = t;
  s.u.resize(s.grid->size());
  for (auto& v : s.u)
    if (!(is >> v)) throw std::runtime_error("snapshot: truncated data");
  if (kappa_out) *kappa_out = kappa;
  return s;
}

double pairwise_sum(const double* data, std::size_t n) {
  if (n <= 16) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += data[i];
    return s;
  }
  const std::size_t half = n / 2;
  return pairwise_sum(data, half) + pairwise_sum(data + half, n - half);
}

}  // namespace icf
