#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "icf/counterexample.hpp"
#include "testutil.hpp"

using namespace icf;

TEST_CASE("c0 vanishes exactly for the round profile") {
  const SphericalGrid g(64, 128);
  CHECK_THROWS_AS(compute_c0(make_fbar("zero", 0.3), g), DegenerateChoice);
}

TEST_CASE("c0 is quadrature-zero for a first-eigenfunction profile") {
  // e^-fbar = 1 + 0.2 cos(theta) is constant plus a first eigenfunction, so
  // the tracefree Hessian annihilates it up to discretization error; the
  // residue sits below the degeneracy floor and is flagged.
  const FbarProfile f{"first_eig",
                      [](double th, double) { return -std::log(1.0 + 0.2 * std::cos(th)); }};
  for (int nt : {64, 128}) {
    const SphericalGrid g(nt, 2 * nt);
    double c0 = 0.0;
    try {
      c0 = compute_c0(f, g);
    } catch (const DegenerateChoice&) {
      c0 = 0.0;
    }
    CHECK(c0 < 1e-8);
  }
}

TEST_CASE("c0 of the quadrupole profile: refinement agreement and frozen value") {
  const FbarProfile f = make_fbar("quadrupole", 0.3);
  const double c128 = compute_c0(f, SphericalGrid(128, 256));
  const double c256 = compute_c0(f, SphericalGrid(256, 512));
  CHECK(std::abs(c128 - c256) / c256 < 1e-6);

  // independent oracle: dense 1D Simpson on the axisymmetric reduction
  //   c0 = [2pi int e^{2f} sin] * [2pi int (w'' - cot w')^2/2 sin]
  const int N = 20000;
  const double h = M_PI / N;
  auto fbar = [](double th) { return 0.3 * (std::cos(th) * std::cos(th) - 1.0 / 3.0); };
  auto q1 = [&](double th) { return std::exp(2.0 * fbar(th)) * std::sin(th); };
  auto q2 = [&](double th) {
    const double fp = -0.3 * std::sin(2 * th);
    const double fpp = -0.6 * std::cos(2 * th);
    const double w = std::exp(-fbar(th));
    const double wp = -fp * w;
    const double wpp = (-fpp + fp * fp) * w;
    const double d = wpp - std::cos(th) / std::sin(th) * wp;
    return 0.5 * d * d * std::sin(th);
  };
  auto simpson = [&](auto&& fn) {
    double s = 0.0;
    for (int k = 1; k < N; k += 2) s += 4 * fn(k * h);
    for (int k = 2; k < N; k += 2) s += 2 * fn(k * h);
    return 2 * M_PI * h / 3 * s;  // integrand vanishes at both poles
  };
  const double oracle = simpson(q1) * simpson(q2);
  CHECK(oracle == doctest::Approx(14.9458957971).epsilon(1e-8));
  CHECK(c256 == doctest::Approx(oracle).epsilon(1e-6));
}

TEST_CASE("shifted graph construction") {
  const SpaceForm sf(-1);
  auto grid = std::make_shared<SphericalGrid>(64, 128);
  const SurfaceState flat = build_initial(sf, make_fbar("zero", 0.0), 3.0, grid);
  for (double u : flat.u) CHECK(u == 3.0);

  const SurfaceState s = build_initial(sf, make_fbar("quadrupole", 0.3), 6.0, grid);
  double lo = s.u[0], hi = s.u[0];
  for (double u : s.u) {
    lo = std::min(lo, u);
    hi = std::max(hi, u);
  }
  // continuum range of 0.3 (cos^2 - 1/3) is 0.3; half-offset nodes miss the
  // poles so the grid range is slightly smaller
  CHECK(hi - lo <= 0.3);
  CHECK(hi - lo >= 0.3 * 0.99);
  CHECK(check_admissibility(sf, s, 0.1).passed);

  CHECK_THROWS_AS(build_initial(SpaceForm(0), make_fbar("zero", 0.0), 3.0, grid), ConfigError);
}

TEST_CASE("admissibility of a round sphere of radius three") {
  const SpaceForm sf(-1);
  const auto state = make_constant_state(std::make_shared<SphericalGrid>(32, 64), 3.0);
  const AdmissibilityReport rep = check_admissibility(sf, state, 0.1);
  CHECK(rep.passed);
  CHECK(rep.min_H == doctest::Approx(2.0099396466).epsilon(1e-9));
  CHECK(rep.max_H <= 3.0);
  CHECK(rep.min_ray_alignment == 1.0);
  CHECK(rep.max_asq_ratio == 0.0);
}

TEST_CASE("a wildly sloped graph fails admissibility") {
  const SpaceForm sf(-1);
  const auto state = icf::test::grid_state(32, 64, [](double th, double) {
    const double c = std::cos(th);
    return 1.0 + 5.0 * c * c;
  });
  const AdmissibilityReport rep = check_admissibility(sf, state, 0.1);
  CHECK_FALSE(rep.passed);
  // loses mean convexity outright, and the pinching margin with it
  CHECK(rep.min_H < 0.1);
  CHECK(rep.max_asq_ratio >= 0.25);
}

TEST_CASE("control run with the flat profile is exactly round") {
  CounterexampleConfig cfg;
  cfg.fbar_name = "zero";
  cfg.n_theta = 16;
  cfg.n_phi = 32;
  cfg.t_end = 1.0;
  cfg.cfl_safety = 1.0;
  const CounterexampleResult res = run_counterexample(cfg);
  CHECK(res.c0_degenerate);
  CHECK(res.verdict == Verdict::round);
  for (const auto& r : res.records) CHECK(std::abs(r.Q) < 1e-8);
}

TEST_CASE("short quadrupole run drives Q negative and keeps the barriers") {
  CounterexampleConfig cfg;
  cfg.n_theta = 32;
  cfg.n_phi = 64;
  cfg.t_end = 1.5;
  cfg.cfl_safety = 1.0;
  const CounterexampleResult res = run_counterexample(cfg);
  CHECK(res.c0 > 0.0);
  CHECK(res.reason == TerminationReason::t_end);
  CHECK(res.records.back().Q < -res.c0 / 8);

  // barrier quantities along the run:
  //   e^(-t/2^alpha) chi >= its initial minimum (within tolerance)
  //   min H stays above half its initial value
  const double chi0 = res.records.front().min_chi;
  const double h0 = res.records.front().min_F;
  for (const auto& r : res.records) {
    const double scaled_chi = std::exp(-r.t * std::pow(2.0, -cfg.alpha)) * r.min_chi;
    CHECK(scaled_chi >= chi0 - 1e-4);
    CHECK(r.min_F > 0.5 * h0);
    CHECK(r.max_G <= res.records.front().max_G + 1e-9);  // pinching monotone
  }

  // doubling the shift roughly quadruples the area, c0 unchanged
  CounterexampleConfig big = cfg;
  big.shift_s = cfg.shift_s + std::log(2.0);  // area ~ sinh^2 ~ e^(2s)/4
  const CounterexampleResult res2 = run_counterexample(big);
  CHECK(res2.m0_area / res.m0_area == doctest::Approx(4.0).epsilon(0.01));
  CHECK(res2.c0 == res.c0);
}

TEST_CASE("non-axisymmetric profile also admits the construction") {
  const FbarProfile f = make_fbar("quadrupole_tesseral", 0.3);
  const double c0 = compute_c0(f, SphericalGrid(128, 256));
  CHECK(c0 > 0.0);
  const SpaceForm sf(-1);
  auto grid = std::make_shared<SphericalGrid>(32, 64);
  const SurfaceState s = build_initial(sf, f, 6.0, grid);
  CHECK(check_admissibility(sf, s, 0.1).passed);
}

TEST_CASE("alpha outside (0,1) is rejected") {
  CounterexampleConfig cfg;
  cfg.alpha = 1.0;
  CHECK_THROWS_AS(run_counterexample(cfg), ConfigError);
  cfg.alpha = 0.0;
  CHECK_THROWS_AS(run_counterexample(cfg), ConfigError);
}

TEST_CASE("inadmissible initial data is refused, not run") {
  CounterexampleConfig cfg;
  cfg.shift_s = 0.5;  // H = 2 coth(u) > 3 this close to the center
  cfg.n_theta = 16;
  cfg.n_phi = 32;
  cfg.t_end = 0.5;
  CHECK_THROWS_AS(run_counterexample(cfg), ConfigError);
}

TEST_CASE("verdict line format") {
  CounterexampleResult r;
  r.verdict = Verdict::non_round;
  r.c0 = 14.9458957971;
  r.q_threshold = -r.c0 / 8;
  r.fit_rate_Hdev = -1.4142;
  r.records.push_back({});
  r.records.back().Q = -14.92;
  const std::string line = verdict_line(r);
  CHECK(line == "non_round,14.9458957971,-14.92,-1.86823697464,-1.4142");
}
