// Batch front-end for the inverse curvature flow simulator.
//
//   icf run <config> [--out DIR] [--threads N]
//   icf validate-speed <name>
//   icf oracle <kappa> <alpha> <rho0> <t>
//
// Exit codes: 0 normal termination (including equator proximity for
// kappa=+1), 1 configuration errors, 2 blow-up or cone violation.

#include <filesystem>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>
#ifdef _OPENMP
#include <omp.h>
#endif

#include "icf/config.hpp"
#include "icf/counterexample.hpp"
#include "icf/reference.hpp"

namespace fs = std::filesystem;
using namespace icf;

namespace {

void write_meta(const fs::path& dir, std::string_view reason, double wall, long steps) {
  std::ofstream meta(dir / "run.meta");
  meta << "termination=" << reason << '\n'
       << "wall_seconds=" << format_double(wall) << '\n'
       << "steps=" << steps << '\n';
}

int run_flow(const RunSpec& spec, const fs::path& out_dir) {
  FlowConfig cfg = to_flow_config(spec);
  const RunResult res = run(cfg);

  std::ofstream csv(out_dir / "diagnostics.csv");
  write_csv(csv, res.records);
  std::ofstream snap(out_dir / "final.snap");
  if (!res.snapshots.empty()) write_snapshot(snap, spec.kappa, res.snapshots.back());
  write_meta(out_dir, to_string(res.reason), res.wall_seconds, res.steps);

  std::cout << "terminated: " << to_string(res.reason) << " at t=" << format_double(res.t_final)
            << " after " << res.steps << " steps\n";
  const bool bad = res.reason == TerminationReason::blowup ||
                   res.reason == TerminationReason::cone_violation;
  return bad ? 2 : 0;
}

int run_counter(const RunSpec& spec, const fs::path& out_dir) {
  const CounterexampleConfig cfg = to_counterexample_config(spec);
  const CounterexampleResult res = run_counterexample(cfg);

  std::ofstream csv(out_dir / "diagnostics.csv");
  write_csv(csv, res.records);
  std::ofstream snap(out_dir / "final.snap");
  write_snapshot(snap, -1, res.final_state);
  {
    // conformal factor dump reuses the snapshot layout
    SurfaceState conf = res.final_state;
    conf.u = res.conformal_factor;
    std::ofstream cs(out_dir / "conformal.snap");
    write_snapshot(cs, -1, conf);
  }
  std::ofstream verdict(out_dir / "verdict.csv");
  verdict << verdict_line(res) << '\n';
  write_meta(out_dir, to_string(res.reason), res.wall_seconds, res.steps);

  std::cout << verdict_line(res) << '\n';
  return 0;
}

int run_validate(const std::string& name) {
  const SpeedFunction& f = speed_by_name(name);
  const auto samples = halton_cone_samples(f, 100);
  const ValidationReport rep = validate_assumption(f, samples);
  std::cout << "speed " << f.name << ": " << (rep.passed ? "pass" : "FAIL") << '\n'
            << "  symmetry err      " << format_double(rep.max_symmetry_err) << '\n'
            << "  homogeneity err   " << format_double(rep.max_homogeneity_err) << '\n'
            << "  normalization err " << format_double(rep.normalization_err) << '\n'
            << "  min grad comp     " << format_double(rep.min_grad_component) << '\n'
            << "  grad vs fd        " << format_double(rep.max_grad_fd_rel_err) << '\n';
  for (const auto& v : rep.violations) std::cout << "  violation: " << v << '\n';
  return rep.passed ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"inverse curvature flow simulator"};
  app.require_subcommand(1);

  std::string config_path, out_override, speed_name;
  int threads = 0;
  int kappa = 0;
  double alpha = 1.0, rho0 = 1.0, t_query = 0.0;

  auto* cmd_run = app.add_subcommand("run", "run a flow or counterexample config");
  cmd_run->add_option("config", config_path, "config file")->required();
  cmd_run->add_option("--out", out_override, "output directory (overrides config)");
  cmd_run->add_option("--threads", threads, "worker count (no effect on output bytes)");

  auto* cmd_val = app.add_subcommand("validate-speed", "check a registered speed function");
  cmd_val->add_option("name", speed_name, "speed function name")->required();

  auto* cmd_oracle = app.add_subcommand("oracle", "sphere solution radius");
  cmd_oracle->add_option("kappa", kappa)->required();
  cmd_oracle->add_option("alpha", alpha)->required();
  cmd_oracle->add_option("rho0", rho0)->required();
  cmd_oracle->add_option("t", t_query)->required();

  CLI11_PARSE(app, argc, argv);

#ifdef _OPENMP
  if (threads > 0) omp_set_num_threads(threads);
#endif

  try {
    if (cmd_oracle->parsed()) {
      const SphereSolution sol{kappa, alpha, rho0};
      check_flow_exponent(alpha, kappa);
      std::cout << format_double(sol.radius(t_query)) << '\n';
      return 0;
    }
    if (cmd_val->parsed()) return run_validate(speed_name);

    const RunSpec spec = [&] {
      RunSpec s = parse_config(config_path);
      if (!out_override.empty()) s.out_dir = out_override;
      return s;
    }();
    fs::create_directories(spec.out_dir);
    if (spec.mode == RunMode::validate) return run_validate(spec.speed);
    if (spec.mode == RunMode::counterexample) return run_counter(spec, spec.out_dir);
    return run_flow(spec, spec.out_dir);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 1;
  } catch (const PastEquatorError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const ConeViolation& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const NumericalBlowup& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
