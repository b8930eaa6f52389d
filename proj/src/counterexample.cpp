#include "icf/counterexample.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace icf {

FbarProfile make_fbar(const std::string& name, double amplitude) {
  if (name == "zero") return {"zero", [](double, double) { return 0.0; }};
  if (name == "quadrupole")
    return {"quadrupole", [amplitude](double th, double) {
              const double c = std::cos(th);
              return amplitude * (c * c - 1.0 / 3.0);
            }};
  if (name == "quadrupole_tesseral")
    return {"quadrupole_tesseral", [amplitude](double th, double ph) {
              const double c = std::cos(th), s = std::sin(th);
              return amplitude * (c * c - 1.0 / 3.0) + 0.5 * amplitude * std::cos(2 * ph) * s * s;
            }};
  throw ConfigError("unknown fbar profile '" + name + "'");
}

namespace {

// Fourth-order scheme dedicated to c0: two ghost rows across each pole, two
// periodic ghost columns, five-point stencils, and midpoint quadrature with
// the O(dth^2) pole term removed via extrapolated pole values.
class C0Workspace {
 public:
  C0Workspace(const SphericalGrid& g) : nt_(g.n_theta()), np_(g.n_phi()), W_(np_ + 4) {}

  // values: plain scalar field, sign = +1; theta-derivative fields flip sign
  // across the pole, sign = -1.
  std::vector<double> extend(const std::vector<double>& field, double sign) const {
    std::vector<double> E(static_cast<std::size_t>(nt_ + 4) * W_);
    auto at = [&](int i, int j) -> double& { return E[static_cast<std::size_t>(i) * W_ + j]; };
    const int half = np_ / 2;
    for (int i = 0; i < nt_; ++i)
      for (int j = 0; j < np_; ++j) at(i + 2, j + 2) = field[idx(i, j)];
    for (int j = 0; j < np_; ++j) {
      const int js = (j + half) % np_;
      at(1, j + 2) = sign * field[idx(0, js)];
      at(0, j + 2) = sign * field[idx(1, js)];
      at(nt_ + 2, j + 2) = sign * field[idx(nt_ - 1, js)];
      at(nt_ + 3, j + 2) = sign * field[idx(nt_ - 2, js)];
    }
    for (int i = 0; i < nt_ + 4; ++i) {
      at(i, 0) = at(i, np_);
      at(i, 1) = at(i, np_ + 1);
      at(i, np_ + 2) = at(i, 2);
      at(i, np_ + 3) = at(i, 3);
    }
    return E;
  }

  std::size_t idx(int i, int j) const { return static_cast<std::size_t>(i) * np_ + j; }
  double ext_at(const std::vector<double>& E, int i, int j) const {
    return E[static_cast<std::size_t>(i + 2) * W_ + (j + 2)];
  }

  std::vector<double> d_theta(const std::vector<double>& E, double h) const {
    return apply([&](int i, int j) {
      return (ext_at(E, i - 2, j) - 8 * ext_at(E, i - 1, j) + 8 * ext_at(E, i + 1, j) -
              ext_at(E, i + 2, j)) /
             (12 * h);
    });
  }
  std::vector<double> d_phi(const std::vector<double>& E, double h) const {
    return apply([&](int i, int j) {
      return (ext_at(E, i, j - 2) - 8 * ext_at(E, i, j - 1) + 8 * ext_at(E, i, j + 1) -
              ext_at(E, i, j + 2)) /
             (12 * h);
    });
  }
  std::vector<double> d2_theta(const std::vector<double>& E, double h) const {
    return apply([&](int i, int j) {
      return (-ext_at(E, i - 2, j) + 16 * ext_at(E, i - 1, j) - 30 * ext_at(E, i, j) +
              16 * ext_at(E, i + 1, j) - ext_at(E, i + 2, j)) /
             (12 * h * h);
    });
  }
  std::vector<double> d2_phi(const std::vector<double>& E, double h) const {
    return apply([&](int i, int j) {
      return (-ext_at(E, i, j - 2) + 16 * ext_at(E, i, j - 1) - 30 * ext_at(E, i, j) +
              16 * ext_at(E, i, j + 1) - ext_at(E, i, j + 2)) /
             (12 * h * h);
    });
  }

 private:
  template <class Fn>
  std::vector<double> apply(Fn&& fn) const {
    std::vector<double> out(static_cast<std::size_t>(nt_) * np_);
    for (int i = 0; i < nt_; ++i)
      for (int j = 0; j < np_; ++j) out[idx(i, j)] = fn(i, j);
    return out;
  }

  int nt_, np_, W_;
};

// Midpoint rule in theta with sin(theta) weight plus the pole correction
// -(dth^2/24)(q(N) + q(S)), with pole values extrapolated from the first
// four rows. Fourth-order for integrands smooth on the sphere.
double corrected_integral(const SphericalGrid& g, const std::vector<double>& q) {
  const int nt = g.n_theta(), np = g.n_phi();
  const double dth = g.dtheta(), dph = g.dphi();
  std::vector<double> terms(g.size());
  for (int i = 0; i < nt; ++i)
    for (int j = 0; j < np; ++j)
      terms[g.index(i, j)] = q[g.index(i, j)] * g.sin_theta()[i] * dth * dph;
  double total = pairwise_sum(terms.data(), terms.size());
  static constexpr double c[4] = {35.0 / 16, -35.0 / 16, 21.0 / 16, -5.0 / 16};
  double qn = 0.0, qs = 0.0;
  for (int j = 0; j < np; ++j) {
    for (int r = 0; r < 4; ++r) {
      qn += c[r] * q[g.index(r, j)];
      qs += c[r] * q[g.index(nt - 1 - r, j)];
    }
  }
  qn /= np;
  qs /= np;
  total -= dth * dth / 24.0 * (qn + qs) * 2.0 * M_PI;
  return total;
}

}  // namespace

double compute_c0(const FbarProfile& fbar, const SphericalGrid& g) {
  const int nt = g.n_theta(), np = g.n_phi();
  std::vector<double> F(g.size()), Wv(g.size());
  for (int i = 0; i < nt; ++i)
    for (int j = 0; j < np; ++j) {
      const double f = fbar.value(g.theta(i), g.phi(j));
      F[g.index(i, j)] = f;
      Wv[g.index(i, j)] = std::exp(-f);
    }

  const C0Workspace ws(g);
  const auto E = ws.extend(Wv, +1.0);
  const auto ut = ws.d_theta(E, g.dtheta());
  const auto up = ws.d_phi(E, g.dphi());
  const auto utt = ws.d2_theta(E, g.dtheta());
  const auto upp = ws.d2_phi(E, g.dphi());
  const auto Et = ws.extend(ut, -1.0);  // theta-derivative flips across the pole
  const auto utp = ws.d_phi(Et, g.dphi());

  std::vector<double> q2(g.size()), q1(g.size());
  for (int i = 0; i < nt; ++i) {
    const double st = g.sin_theta()[i], ct = g.cos_theta()[i];
    const double cot = ct / st, ist2 = 1.0 / (st * st);
    for (int j = 0; j < np; ++j) {
      const std::size_t k = g.index(i, j);
      const double htt = utt[k];
      const double htp = utp[k] - cot * up[k];
      const double hpp = upp[k] + st * ct * ut[k];
      const double lap = htt + hpp * ist2;
      const double nrm2 = htt * htt + 2.0 * (htp * htp) * ist2 + (hpp * ist2) * (hpp * ist2);
      q2[k] = nrm2 - 0.5 * lap * lap;  // tracefree part in dimension two
      q1[k] = std::exp(2.0 * F[k]);
    }
  }
  const double c0 = corrected_integral(g, q1) * corrected_integral(g, q2);
  if (c0 < 1e-10)
    throw DegenerateChoice("compute_c0: c0 = " + std::to_string(c0) +
                           "; profile has no roundness obstruction");
  return c0;
}

SurfaceState build_initial(const SpaceForm& sf, const FbarProfile& fbar, double shift_s,
                           std::shared_ptr<const SphericalGrid> grid) {
  if (sf.kappa() != -1)
    throw ConfigError("counterexample: ambient must be hyperbolic space");
  SurfaceState s;
  s.u.resize(grid->size());
  for (int i = 0; i < grid->n_theta(); ++i)
    for (int j = 0; j < grid->n_phi(); ++j)
      s.u[grid->index(i, j)] = shift_s + fbar.value(grid->theta(i), grid->phi(j));
  s.grid = std::move(grid);
  s.t = 0.0;
  return s;
}

AdmissibilityReport check_admissibility(const SpaceForm& sf, const SurfaceState& state,
                                        double eps0) {
  // unchecked sweep: the whole point is to report on possibly inadmissible data
  const CurvatureField c =
      compute_curvature_unchecked(sf, speed_by_name("mean_curvature"), state);
  AdmissibilityReport rep;
  rep.eps0 = eps0;
  rep.min_H = rep.max_H = c.lambda1[0] + c.lambda2[0];
  rep.min_ray_alignment = 1.0 / c.v[0];
  rep.max_asq_ratio = 0.0;
  for (std::size_t k = 0; k < state.u.size(); ++k) {
    const double H = c.lambda1[k] + c.lambda2[k];
    const double dl = c.lambda1[k] - c.lambda2[k];
    rep.min_H = std::min(rep.min_H, H);
    rep.max_H = std::max(rep.max_H, H);
    rep.min_ray_alignment = std::min(rep.min_ray_alignment, 1.0 / c.v[k]);
    rep.max_asq_ratio = std::max(rep.max_asq_ratio, 0.5 * dl * dl / (H * H));
  }
  rep.passed = rep.min_H >= eps0 && rep.max_H <= 3.0 && rep.min_ray_alignment >= eps0 &&
               rep.max_asq_ratio < 0.25;
  return rep;
}

std::string_view to_string(Verdict v) {
  switch (v) {
    case Verdict::round: return "round";
    case Verdict::non_round: return "non_round";
    default: return "indeterminate";
  }
}

CounterexampleResult run_counterexample(const CounterexampleConfig& cfg) {
  if (!(cfg.alpha > 0.0 && cfg.alpha < 1.0))
    throw ConfigError("counterexample.alpha: must lie in (0,1)");
  const SpaceForm sf(-1);
  const FbarProfile fbar = make_fbar(cfg.fbar_name, cfg.fbar_amplitude);

  CounterexampleResult res;
  // Roundness obstruction at two quadrature resolutions, both finer than the
  // run grid; the finer value is the one used for the verdict threshold.
  {
    const SphericalGrid gq1(2 * cfg.n_theta, 4 * cfg.n_theta);
    const SphericalGrid gq2(4 * cfg.n_theta, 8 * cfg.n_theta);
    try {
      res.c0_coarse = compute_c0(fbar, gq1);
      res.c0 = compute_c0(fbar, gq2);
      res.c0_agreement = std::abs(res.c0_coarse - res.c0) / res.c0;
    } catch (const DegenerateChoice&) {
      res.c0 = res.c0_coarse = 0.0;
      res.c0_agreement = 0.0;
      res.c0_degenerate = true;
    }
  }
  res.q_threshold = -res.c0 / 8.0;

  auto grid = std::make_shared<SphericalGrid>(cfg.n_theta, cfg.n_phi);
  SurfaceState initial = build_initial(sf, fbar, cfg.shift_s, grid);
  const AdmissibilityReport adm = check_admissibility(sf, initial, cfg.eps0);
  if (!adm.passed)
    throw ConfigError("counterexample: initial surface fails admissibility (min H " +
                      std::to_string(adm.min_H) + ", min ray alignment " +
                      std::to_string(adm.min_ray_alignment) + ", max |A0|^2/H^2 " +
                      std::to_string(adm.max_asq_ratio) + ")");

  FlowConfig fc;
  fc.sf = sf;
  fc.speed = "mean_curvature";
  fc.alpha = cfg.alpha;
  fc.initial = std::move(initial);
  fc.t_end = cfg.t_end;
  fc.record_every = cfg.record_every;
  fc.cfl_safety = cfg.cfl_safety;
  fc.backend = cfg.backend;
  RunResult run_res = run(fc);
  if (run_res.reason == TerminationReason::cone_violation)
    throw ConeViolation("counterexample: mean convexity lost during the flow");
  if (run_res.reason == TerminationReason::blowup)
    throw NumericalBlowup("counterexample: flow blew up");

  res.records = std::move(run_res.records);
  res.reason = run_res.reason;
  res.steps = run_res.steps;
  res.wall_seconds = run_res.wall_seconds;
  res.m0_area = res.records.front().area;

  // Trailing-window statistics of Q.
  const double t_last = res.records.back().t;
  const double t_first = res.records.front().t;
  const double t_from = t_last - 0.25 * (t_last - t_first);
  std::vector<double> ts, qs;
  double max_abs_q = 0.0;
  for (const auto& r : res.records) {
    max_abs_q = std::max(max_abs_q, std::abs(r.Q));
    if (r.t >= t_from) {
      ts.push_back(r.t);
      qs.push_back(r.Q);
    }
  }
  res.q_trailing_avg = std::accumulate(qs.begin(), qs.end(), 0.0) / qs.size();
  res.q_trailing_slope = linear_fit(ts, qs).slope;

  // Decay of |M_s| max|H-2| over the trailing half.
  std::vector<std::pair<double, double>> hdev;
  for (const auto& r : res.records)
    if (r.max_H_dev) hdev.emplace_back(r.t, res.m0_area * *r.max_H_dev);
  try {
    const FitResult fit = fit_decay_rate(hdev, 0.5);
    res.fit_rate_Hdev = fit.rate;
    res.fit_rate_Hdev_goodness = fit.goodness;
  } catch (const InsufficientData&) {
    res.fit_rate_Hdev = 0.0;
    res.fit_rate_Hdev_goodness = 0.0;
  }

  const bool stabilized =
      std::abs(res.q_trailing_slope) <= 0.02 * std::abs(res.q_trailing_avg);
  if (max_abs_q < 1e-8)
    res.verdict = Verdict::round;
  else if (stabilized && res.q_trailing_avg <= res.q_threshold && !res.c0_degenerate)
    res.verdict = Verdict::non_round;
  else
    res.verdict = Verdict::indeterminate;

  // Rescaled conformal factor of the final state.
  res.final_state = std::move(run_res.snapshots.back());
  const double scale = std::exp(-std::pow(2.0, 1.0 - cfg.alpha) * res.final_state.t);
  const auto& g = *res.final_state.grid;
  res.conformal_factor.resize(g.size());
  std::vector<double> logc(g.size());
  for (std::size_t k = 0; k < g.size(); ++k) {
    const double sh = std::sinh(res.final_state.u[k]);
    res.conformal_factor[k] = scale * sh * sh;
    logc[k] = std::log(res.conformal_factor[k]);
  }
  std::vector<double> wlog(g.size());
  for (int i = 0; i < g.n_theta(); ++i)
    for (int j = 0; j < g.n_phi(); ++j)
      wlog[g.index(i, j)] = logc[g.index(i, j)] * g.node_weight(i);
  const double mean_log = pairwise_sum(wlog.data(), wlog.size()) / (4.0 * M_PI);
  res.conformal_log_normed.resize(g.size());
  for (std::size_t k = 0; k < g.size(); ++k) res.conformal_log_normed[k] = logc[k] - mean_log;
  return res;
}

std::string verdict_line(const CounterexampleResult& r) {
  return std::string(to_string(r.verdict)) + "," + format_double(r.c0) + "," +
         format_double(r.records.back().Q) + "," + format_double(r.q_threshold) + "," +
         format_double(r.fit_rate_Hdev);
}

}  // namespace icf
