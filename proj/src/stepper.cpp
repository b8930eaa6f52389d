#include "icf/stepper.hpp"

#include <chrono>
#include <cmath>

#include "icf/reference.hpp"

namespace icf {

std::string_view to_string(TerminationReason r) {
  switch (r) {
    case TerminationReason::t_end: return "t_end";
    case TerminationReason::max_steps: return "max_steps";
    case TerminationReason::blowup: return "blowup";
    case TerminationReason::cone_violation: return "cone_violation";
    default: return "equator_proximity";
  }
}

void validate(const FlowConfig& cfg) {
  check_flow_exponent(cfg.alpha, cfg.sf.kappa());
  if (!(cfg.t_end > 0.0)) throw ConfigError("flow.t_end: must be positive");
  if (!(cfg.cfl_safety > 0.0 && cfg.cfl_safety <= 1.0))
    throw ConfigError("flow.cfl_safety: must lie in (0,1]");
  if (!(cfg.cfl_denom > 0.0)) throw ConfigError("flow.cfl_denom: must be positive");
  if (cfg.max_steps <= 0) throw ConfigError("flow.max_steps: must be positive");
  if (!(cfg.record_every > 0.0)) throw ConfigError("output.record_every: must be positive");
  if (!cfg.initial.grid) throw ConfigError("flow: initial surface missing");
  speed_by_name(cfg.speed);
  const double dmax = cfg.sf.domain_max();
  for (double u : cfg.initial.u)
    if (!(u > 0.0 && u < dmax))
      throw ConfigError("flow: initial surface leaves the radial domain");
}

std::vector<double> rhs(const SpaceForm& sf, const SpeedFunction& f, double alpha,
                        const SurfaceState& state, Backend backend) {
  std::vector<double> out;
  const FlowKernelResult res = flow_rhs(sf, f, alpha, state, out, backend);
  if (res.domain_violation) throw RadialDomainError("rhs: u outside radial domain");
  if (res.cone_violation) throw ConeViolation("rhs: surface left the admissible cone");
  if (res.nonfinite) throw NumericalBlowup("rhs: non-finite value");
  return out;
}

double stable_dt(const SpaceForm& sf, const SpeedFunction& f, double alpha,
                 const SurfaceState& state, double cfl_safety, double denom, Backend backend) {
  std::vector<double> scratch;
  const FlowKernelResult res = flow_rhs(sf, f, alpha, state, scratch, backend);
  if (res.domain_violation) throw RadialDomainError("stable_dt: u outside radial domain");
  if (res.cone_violation) throw ConeViolation("stable_dt: surface left the admissible cone");
  if (res.nonfinite || !std::isfinite(res.min_dt_unscaled))
    throw NumericalBlowup("stable_dt: non-finite curvature");
  return cfl_safety * res.min_dt_unscaled / denom;
}

namespace {

constexpr double kEquatorMargin = 1e-3;

double max_of(const std::vector<double>& v) {
  double m = v[0];
  for (double x : v) m = std::max(m, x);
  return m;
}

double min_of(const std::vector<double>& v) {
  double m = v[0];
  for (double x : v) m = std::min(m, x);
  return m;
}

}  // namespace

RunResult run(const FlowConfig& cfg) {
  validate(cfg);
  const auto wall_start = std::chrono::steady_clock::now();
  const SpeedFunction& f = speed_by_name(cfg.speed);
  const SpaceForm& sf = cfg.sf;
  const int kappa = sf.kappa();

  SurfaceState state = cfg.initial;
  const std::size_t n = state.u.size();

  // below a few thousand nodes the parallel-region overhead exceeds the
  // sweep cost; both backends are bitwise identical, so this only buys time
  Backend backend = cfg.backend;
  if (backend == Backend::openmp && n < 4096) backend = Backend::serial;

  // Companion sphere seed for the Euclidean rescaled diagnostics.
  std::optional<double> rbar;
  if (kappa == 0) rbar = std::sqrt(min_of(state.u) * max_of(state.u));

  RunResult result;
  double tau = 0.0, prev_rate = 0.0, prev_t = state.t;
  bool have_tau = false;
  auto record = [&](const SurfaceState& s) {
    DiagnosticsRecord rec = snapshot_diagnostics(sf, f, cfg.alpha, s, rbar, backend);
    if (kappa == 0) {
      const double rate = std::pow(euclid_radius(cfg.alpha, *rbar, s.t), cfg.alpha - 1.0);
      if (have_tau) tau += 0.5 * (prev_rate + rate) * (s.t - prev_t);
      prev_rate = rate;
      prev_t = s.t;
      have_tau = true;
      rec.tau = tau;
    }
    result.snapshots.push_back(s);
    result.records.push_back(std::move(rec));
  };

  std::vector<double> rhs0, rhs1;
  SurfaceState mid = state;
  // record times as integer multiples, not accumulated increments, so the
  // final cadence mark cannot land a roundoff step before t_end
  const double t0 = state.t;
  long rec_index = 1;
  double next_record = t0 + rec_index * cfg.record_every;
  result.reason = TerminationReason::t_end;

  // probe the initial state before putting diagnostics on it; an initial
  // cone violation terminates the run instead of throwing
  {
    const FlowKernelResult k_init = flow_rhs(sf, f, cfg.alpha, state, rhs0, backend);
    if (!k_init.ok()) {
      result.reason = k_init.cone_violation ? TerminationReason::cone_violation
                                            : TerminationReason::blowup;
      result.t_final = state.t;
      result.wall_seconds =
          std::chrono::duration<double>(std::chrono::steady_clock::now() - wall_start).count();
      return result;
    }
  }
  record(state);

  auto finish = [&](TerminationReason reason, bool record_final) {
    result.reason = reason;
    if (record_final && state.t > result.snapshots.back().t) record(state);
    result.t_final = state.t;
    result.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - wall_start).count();
  };

  if (kappa == 1 && max_of(state.u) >= M_PI / 2 - kEquatorMargin) {
    finish(TerminationReason::equator_proximity, false);
    return result;
  }

  while (true) {
    if (state.t >= cfg.t_end) {
      finish(TerminationReason::t_end, true);
      return result;
    }
    if (result.steps >= cfg.max_steps) {
      finish(TerminationReason::max_steps, true);
      return result;
    }

    const FlowKernelResult k0 = flow_rhs(sf, f, cfg.alpha, state, rhs0, backend);
    if (!k0.ok()) {
      finish(k0.cone_violation ? TerminationReason::cone_violation : TerminationReason::blowup,
             false);
      return result;
    }
    double dt = cfg.cfl_safety * k0.min_dt_unscaled / cfg.cfl_denom;
    dt = std::min(dt, cfg.t_end - state.t);
    dt = std::min(dt, next_record - state.t);
    if (!(dt > 0.0) || !std::isfinite(dt)) {
      finish(TerminationReason::blowup, false);
      return result;
    }

    mid.t = state.t + 0.5 * dt;
    mid.u.resize(n);
    for (std::size_t i = 0; i < n; ++i) mid.u[i] = state.u[i] + 0.5 * dt * rhs0[i];
    const FlowKernelResult k1 = flow_rhs(sf, f, cfg.alpha, mid, rhs1, backend);
    if (!k1.ok()) {
      finish(k1.cone_violation ? TerminationReason::cone_violation : TerminationReason::blowup,
             false);
      return result;
    }

    for (std::size_t i = 0; i < n; ++i) state.u[i] += dt * rhs1[i];
    state.t += dt;
    ++result.steps;

    if (kappa == 1 && max_of(state.u) >= M_PI / 2 - kEquatorMargin) {
      finish(TerminationReason::equator_proximity, true);
      return result;
    }

    const double t_eps = 1e-12 * std::max(1.0, std::abs(next_record));
    if (state.t >= next_record - t_eps && state.t < cfg.t_end - t_eps) {
      state.t = next_record;  // snap off the roundoff from the capped step
      record(state);
      next_record = t0 + ++rec_index * cfg.record_every;
    }
  }
}

}  // namespace icf
