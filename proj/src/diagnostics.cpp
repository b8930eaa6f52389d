#include "icf/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>

#include "icf/reference.hpp"

namespace icf {

namespace {

// int fn(k) dmu over the surface, fixed-order pairwise summation.
template <class Fn>
double surface_integral(const SpaceForm& sf, const SurfaceState& state,
                        const CurvatureField& field, Fn&& fn) {
  const auto& g = *state.grid;
  std::vector<double> terms(g.size());
  for (int i = 0; i < g.n_theta(); ++i) {
    const double wq = g.node_weight(i);
    for (int j = 0; j < g.n_phi(); ++j) {
      const std::size_t k = g.index(i, j);
      const double s = sf.warp(state.u[k]);
      terms[k] = fn(k) * s * s * field.v[k] * wq;
    }
  }
  return pairwise_sum(terms.data(), terms.size());
}

double node_G(double l1, double l2) {
  const double d = l1 - l2, s = l1 + l2;
  return (d * d) / (s * s);
}

}  // namespace

DiagnosticsRecord snapshot_diagnostics(const SpaceForm& sf, const SpeedFunction& f, double alpha,
                                       const SurfaceState& state, std::optional<double> rbar,
                                       Backend backend) {
  const CurvatureField field = compute_curvature(sf, f, state, backend);
  const SurfaceIntegrals ints = area_and_integrals(sf, state, field, alpha);
  const std::size_t n = state.u.size();

  DiagnosticsRecord r;
  r.t = state.t;
  r.area = ints.area;
  r.int_Asq = ints.asq_integral;
  r.Q = -ints.area * ints.asq_integral;

  double max_G = 0.0, beta = 1.0;
  double min_F = field.F[0], max_F = field.F[0], min_chi = field.chi[0];
  double min_u = state.u[0], max_u = state.u[0];
  for (std::size_t k = 0; k < n; ++k) {
    max_G = std::max(max_G, node_G(field.lambda1[k], field.lambda2[k]));
    beta = std::max(beta, field.lambda2[k] / field.lambda1[k]);
    min_F = std::min(min_F, field.F[k]);
    max_F = std::max(max_F, field.F[k]);
    min_chi = std::min(min_chi, field.chi[k]);
    min_u = std::min(min_u, state.u[k]);
    max_u = std::max(max_u, state.u[k]);
  }
  r.max_G = max_G;
  r.beta = beta;
  r.min_F = min_F;
  r.max_F = max_F;
  r.min_chi = min_chi;
  r.min_u = min_u;
  r.max_u = max_u;

  if (sf.kappa() == -1) {
    double lam_dev = 0.0, coth_dev = 0.0, h_dev = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
      lam_dev = std::max({lam_dev, std::abs(field.lambda1[k] - 1.0),
                          std::abs(field.lambda2[k] - 1.0)});
      coth_dev = std::max(coth_dev, std::cosh(state.u[k]) / std::sinh(state.u[k]) - 1.0);
      h_dev = std::max(h_dev, std::abs(field.lambda1[k] + field.lambda2[k] - 2.0));
    }
    r.max_lam_dev = lam_dev;
    r.max_coth_dev = coth_dev;
    r.max_H_dev = h_dev;
  }

  if (sf.kappa() == 0 && rbar) {
    const double rho = euclid_radius(alpha, *rbar, state.t);
    double lmin = rho * field.lambda1[0], lmax = lmin;
    double fmin = rho * field.F[0], fmax = fmin;
    for (std::size_t k = 0; k < n; ++k) {
      lmin = std::min(lmin, rho * field.lambda1[k]);
      lmax = std::max(lmax, rho * field.lambda2[k]);
      fmin = std::min(fmin, rho * field.F[k]);
      fmax = std::max(fmax, rho * field.F[k]);
    }
    r.lam_tilde_min = lmin;
    r.lam_tilde_max = lmax;
    r.F_tilde_min = fmin;
    r.F_tilde_max = fmax;
  }
  return r;
}

LinearFit linear_fit(std::span<const double> x, std::span<const double> y) {
  LinearFit fit;
  const int n = static_cast<int>(x.size());
  fit.n = n;
  if (n < 2) return fit;
  double sx = 0, sy = 0;
  for (int i = 0; i < n; ++i) {
    sx += x[i];
    sy += y[i];
  }
  const double mx = sx / n, my = sy / n;
  double sxx = 0, sxy = 0;
  for (int i = 0; i < n; ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  double ss_res = 0, ss_tot = 0;
  for (int i = 0; i < n; ++i) {
    const double e = y[i] - (fit.intercept + fit.slope * x[i]);
    ss_res += e * e;
    ss_tot += (y[i] - my) * (y[i] - my);
  }
  fit.r2 = ss_tot > 0 ? 1.0 - ss_res / ss_tot : 1.0;
  return fit;
}

FitResult fit_decay_rate(std::span<const std::pair<double, double>> series,
                         double trailing_fraction) {
  if (series.empty()) throw InsufficientData("fit_decay_rate: empty series");
  const double t_last = series.back().first;
  const double t_first = series.front().first;
  const double t_from = t_last - trailing_fraction * (t_last - t_first);
  std::vector<double> xs, ys;
  for (const auto& [t, v] : series) {
    if (t < t_from) continue;
    if (!(v > 1e-13)) continue;  // numerical floor
    xs.push_back(t);
    ys.push_back(std::log(v));
  }
  if (xs.size() < 8)
    throw InsufficientData("fit_decay_rate: only " + std::to_string(xs.size()) +
                           " usable samples in window");
  const LinearFit fit = linear_fit(xs, ys);
  return {fit.slope, fit.r2, fit.n};
}

ResidualReport identity_residuals(const SpaceForm& sf, const SpeedFunction& f, double alpha,
                                  const SurfaceState& prev, const SurfaceState& next) {
  ResidualReport rep;
  rep.dt = next.t - prev.t;
  const CurvatureField f0 = compute_curvature(sf, f, prev);
  const CurvatureField f1 = compute_curvature(sf, f, next);
  const SurfaceIntegrals i0 = area_and_integrals(sf, prev, f0, alpha);
  const SurfaceIntegrals i1 = area_and_integrals(sf, next, f1, alpha);

  // d|M|/dt = int F^(-alpha) H dmu, from the metric evolution.
  auto growth = [&](const SurfaceState& s, const CurvatureField& c) {
    return surface_integral(sf, s, c, [&](std::size_t k) {
      return std::pow(c.F[k], -alpha) * (c.lambda1[k] + c.lambda2[k]);
    });
  };
  const double g0 = growth(prev, f0);
  const double g1 = growth(next, f1);
  const double fd = (i1.area - i0.area) / rep.dt;
  rep.area_growth_fwd = std::abs(fd - g0) / i0.area;
  rep.area_growth_sym = std::abs(fd - 0.5 * (g0 + g1)) / (0.5 * (i0.area + i1.area));

  if (f.kind == SpeedKind::mean_curvature) {
    auto q_terms = [&](const SurfaceState& s, const CurvatureField& c, double area, double asq) {
      const double t1 = area * surface_integral(sf, s, c, [&](std::size_t k) {
                          const double H = c.lambda1[k] + c.lambda2[k];
                          const double dl = c.lambda1[k] - c.lambda2[k];
                          return std::pow(H, 1.0 - alpha) * 0.5 * dl * dl;
                        });
      const double t2 = surface_integral(sf, s, c, [&](std::size_t k) {
                          const double H = c.lambda1[k] + c.lambda2[k];
                          return std::pow(H, 1.0 - alpha);
                        }) *
                        asq;
      return t1 - t2;
    };
    const double q0 = -i0.area * i0.asq_integral;
    const double q1 = -i1.area * i1.asq_integral;
    const double fd_q = (q1 - q0) / rep.dt;
    rep.q_fwd = fd_q - q_terms(prev, f0, i0.area, i0.asq_integral);
  }
  return rep;
}

std::vector<RescaledRecord> rescaled_euclid(std::span<const SurfaceState> states,
                                            const SpeedFunction& f, double alpha, double rbar,
                                            Backend backend) {
  std::vector<RescaledRecord> out;
  out.reserve(states.size());
  double tau = 0.0, prev_t = 0.0, prev_rate = 0.0;
  const SpaceForm sf(0);
  bool first = true;
  for (const auto& state : states) {
    const double rho = euclid_radius(alpha, rbar, state.t);
    const double rate = std::pow(rho, alpha - 1.0);
    if (!first) tau += 0.5 * (prev_rate + rate) * (state.t - prev_t);
    prev_t = state.t;
    prev_rate = rate;
    first = false;

    const CurvatureField c = compute_curvature(sf, f, state, backend);
    RescaledRecord r;
    r.tau = tau;
    r.u_min = state.u[0] / rho;
    r.u_max = r.u_min;
    r.lam_min = rho * c.lambda1[0];
    r.lam_max = rho * c.lambda2[0];
    r.F_min = rho * c.F[0];
    r.F_max = r.F_min;
    for (std::size_t k = 0; k < state.u.size(); ++k) {
      r.u_min = std::min(r.u_min, state.u[k] / rho);
      r.u_max = std::max(r.u_max, state.u[k] / rho);
      r.lam_min = std::min(r.lam_min, rho * c.lambda1[k]);
      r.lam_max = std::max(r.lam_max, rho * c.lambda2[k]);
      r.F_min = std::min(r.F_min, rho * c.F[k]);
      r.F_max = std::max(r.F_max, rho * c.F[k]);
      r.max_G = std::max(r.max_G, node_G(c.lambda1[k], c.lambda2[k]));
    }
    out.push_back(r);
  }
  return out;
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

void write_csv(std::ostream& os, std::span<const DiagnosticsRecord> records) {
  os << "t,tau,max_G,beta,min_F,max_F,min_chi,area,int_Asq,Q,max_u,min_u,"
        "max_lam_dev,max_coth_dev,max_H_dev\n";
  auto opt = [](const std::optional<double>& v) { return v ? format_double(*v) : std::string(); };
  for (const auto& r : records) {
    os << format_double(r.t) << ',' << opt(r.tau) << ',' << format_double(r.max_G) << ','
       << format_double(r.beta) << ',' << format_double(r.min_F) << ',' << format_double(r.max_F)
       << ',' << format_double(r.min_chi) << ',' << format_double(r.area) << ','
       << format_double(r.int_Asq) << ',' << format_double(r.Q) << ',' << format_double(r.max_u)
       << ',' << format_double(r.min_u) << ',' << opt(r.max_lam_dev) << ','
       << opt(r.max_coth_dev) << ',' << opt(r.max_H_dev) << '\n';
  }
}

}  // namespace icf
