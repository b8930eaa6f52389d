#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdint>

#include "icf/geometry.hpp"
#include "testutil.hpp"

using namespace icf;
using icf::test::grid_state;
using icf::test::perturbed_sphere;

namespace {

double max_abs(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

}  // namespace

TEST_CASE("derivatives of a constant vanish exactly") {
  const auto state = grid_state(16, 32, [](double, double) { return 1.7; });
  const DerivField d = differentiate(*state.grid, state.u);
  CHECK(max_abs(d.du_theta) == 0.0);
  CHECK(max_abs(d.du_phi) == 0.0);
  CHECK(max_abs(d.hess_tt) == 0.0);
  CHECK(max_abs(d.hess_tp) == 0.0);
  CHECK(max_abs(d.hess_pp) == 0.0);
}

TEST_CASE("theta derivative of cos(theta) is second-order accurate") {
  const auto state = grid_state(64, 128, [](double th, double) { return std::cos(th); });
  const DerivField d = differentiate(*state.grid, state.u);
  double err = 0.0;
  const auto& g = *state.grid;
  for (int i = 0; i < g.n_theta(); ++i)
    for (int j = 0; j < g.n_phi(); ++j)
      err = std::max(err, std::abs(d.du_theta[g.index(i, j)] + std::sin(g.theta(i))));
  CHECK(err < 1e-3);
}

TEST_CASE("hessian refinement study on cos^2(theta) shows order two") {
  auto hess_err = [](int nt) {
    const auto state = grid_state(nt, 2 * nt, [](double th, double) {
      const double c = std::cos(th);
      return c * c;
    });
    const DerivField d = differentiate(*state.grid, state.u);
    const auto& g = *state.grid;
    double err = 0.0;
    for (int i = 0; i < g.n_theta(); ++i) {
      const double th = g.theta(i);
      const double e_tt = -2.0 * std::cos(2 * th);
      const double e_pp = -std::sin(th) * std::cos(th) * std::sin(2 * th);
      for (int j = 0; j < g.n_phi(); ++j) {
        err = std::max(err, std::abs(d.hess_tt[g.index(i, j)] - e_tt));
        err = std::max(err, std::abs(d.hess_pp[g.index(i, j)] - e_pp));
      }
    }
    return err;
  };
  const double e32 = hess_err(32), e64 = hess_err(64);
  CHECK(e32 / e64 >= 3.6);
}

TEST_CASE("constant radial graphs are exactly umbilic geodesic spheres") {
  struct Case {
    int kappa;
    double u;
    double expect;
  };
  for (const Case c : {Case{0, 2.0, 0.5}, Case{-1, 1.0, 1.3130352854993313},
                       Case{1, M_PI / 4, 1.0}}) {
    const SpaceForm sf(c.kappa);
    auto state = grid_state(16, 32, [](double, double) { return 1.0; });
    for (auto& u : state.u) u = c.u;
    const CurvatureField f = compute_curvature(sf, speed_by_name("mean_curvature"), state);
    for (std::size_t k = 0; k < state.u.size(); ++k) {
      CHECK(f.lambda1[k] == doctest::Approx(c.expect).epsilon(1e-14));
      CHECK(f.lambda2[k] == f.lambda1[k]);  // finite differences of a constant vanish
      CHECK(f.v[k] == 1.0);
    }
  }
}

TEST_CASE("euclidean unit-ish sphere values") {
  const SpaceForm sf(0);
  auto state = grid_state(16, 32, [](double, double) { return 2.0; });
  const CurvatureField f = compute_curvature(sf, speed_by_name("mean_curvature"), state);
  for (std::size_t k = 0; k < state.u.size(); ++k) {
    CHECK(f.chi[k] == 2.0);
    CHECK(f.F[k] == doctest::Approx(1.0).epsilon(1e-15));
  }
}

TEST_CASE("axisymmetric perturbed sphere matches classical polar-graph curvatures") {
  // meridian: (r^2 + 2r'^2 - r r'')/(r^2+r'^2)^(3/2)
  // parallel: (r - r' cot(theta))/(r^2 sqrt(1 + r'^2/r^2))
  const SpaceForm sf(0);
  const auto state = perturbed_sphere(64, 128, 1.0, 0.05);
  const CurvatureField f = compute_curvature(sf, speed_by_name("mean_curvature"), state);
  const auto& g = *state.grid;
  for (int i = 0; i < g.n_theta(); ++i) {
    const double th = g.theta(i);
    const double r = 1.0 + 0.05 * std::cos(th) * std::cos(th);
    const double rp = -0.05 * std::sin(2 * th);
    const double rpp = -0.1 * std::cos(2 * th);
    const double km = (r * r + 2 * rp * rp - r * rpp) / std::pow(r * r + rp * rp, 1.5);
    const double kp =
        (r - rp * std::cos(th) / std::sin(th)) / (r * r * std::sqrt(1.0 + rp * rp / (r * r)));
    const std::size_t k = g.index(i, 0);
    CHECK(f.lambda1[k] == doctest::Approx(std::min(km, kp)).epsilon(5e-4));
    CHECK(f.lambda2[k] == doctest::Approx(std::max(km, kp)).epsilon(5e-4));
  }
}

TEST_CASE("principal curvature ranges converge under refinement") {
  const SpaceForm sf(0);
  auto ranges = [&](int nt) {
    const auto state = perturbed_sphere(nt, 2 * nt, 1.0, 0.05);
    const CurvatureField f = compute_curvature(sf, speed_by_name("mean_curvature"), state);
    double lmin = f.lambda1[0], lmax = f.lambda2[0];
    for (std::size_t k = 0; k < state.u.size(); ++k) {
      lmin = std::min(lmin, f.lambda1[k]);
      lmax = std::max(lmax, f.lambda2[k]);
    }
    return std::pair{lmin, lmax};
  };
  const auto [lo64, hi64] = ranges(64);
  const auto [lo128, hi128] = ranges(128);
  CHECK(std::abs(lo64 / lo128 - 1.0) < 1e-3);
  CHECK(std::abs(hi64 / hi128 - 1.0) < 1e-3);
}

TEST_CASE("quadrature weights sum to the full sphere area") {
  for (int nt : {8, 32, 64}) {
    const SphericalGrid g(nt, 2 * nt);
    double sum = 0.0;
    for (int i = 0; i < g.n_theta(); ++i) sum += g.node_weight(i) * g.n_phi();
    CHECK(sum == doctest::Approx(4 * M_PI).epsilon(1e-12));
  }
}

TEST_CASE("areas of round spheres") {
  const auto state = grid_state(32, 64, [](double, double) { return 1.0; });
  {
    const SpaceForm sf(0);
    const CurvatureField f = compute_curvature(sf, speed_by_name("mean_curvature"), state);
    const SurfaceIntegrals ints = area_and_integrals(sf, state, f, 1.0);
    CHECK(ints.area == doctest::Approx(4 * M_PI).epsilon(1e-6));
    CHECK(ints.asq_integral == 0.0);
  }
  {
    const SpaceForm sf(-1);
    const CurvatureField f = compute_curvature(sf, speed_by_name("mean_curvature"), state);
    const SurfaceIntegrals ints = area_and_integrals(sf, state, f, 1.0);
    const double sh = std::sinh(1.0);
    CHECK(ints.area == doctest::Approx(4 * M_PI * sh * sh).epsilon(1e-6));
  }
}

TEST_CASE("perturbed sphere area agrees with a refined grid") {
  const SpaceForm sf(0);
  auto area_at = [&](int nt) {
    const auto state = perturbed_sphere(nt, 2 * nt, 1.0, 0.1);
    const CurvatureField f = compute_curvature(sf, speed_by_name("mean_curvature"), state);
    return area_and_integrals(sf, state, f, 1.0).area;
  };
  const double a64 = area_at(64), a128 = area_at(128);
  CHECK(std::abs(a64 / a128 - 1.0) < 1e-4);
}

TEST_CASE("axisymmetric input gives longitude-independent outputs") {
  const SpaceForm sf(-1);
  const auto state = perturbed_sphere(24, 48, 2.0, 0.2);
  const CurvatureField f = compute_curvature(sf, speed_by_name("quadratic_mean"), state);
  const auto& g = *state.grid;
  for (int i = 0; i < g.n_theta(); ++i)
    for (int j = 1; j < g.n_phi(); ++j) {
      const std::size_t k0 = g.index(i, 0), k = g.index(i, j);
      CHECK(std::abs(f.lambda1[k] - f.lambda1[k0]) <= 1e-12);
      CHECK(std::abs(f.lambda2[k] - f.lambda2[k0]) <= 1e-12);
      CHECK(std::abs(f.v[k] - f.v[k0]) <= 1e-12);
      CHECK(std::abs(f.chi[k] - f.chi[k0]) <= 1e-12);
      CHECK(std::abs(f.F[k] - f.F[k0]) <= 1e-12);
    }
}

TEST_CASE("longitude rotation permutes outputs identically") {
  const SpaceForm sf(0);
  auto state = grid_state(16, 32, [](double th, double ph) {
    return 1.0 + 0.05 * std::sin(th) * std::sin(th) * std::cos(2 * ph) +
           0.03 * std::cos(th) * std::cos(th);
  });
  const auto& g = *state.grid;
  const int shift = 5;
  SurfaceState rotated = state;
  for (int i = 0; i < g.n_theta(); ++i)
    for (int j = 0; j < g.n_phi(); ++j)
      rotated.u[g.index(i, j)] = state.u[g.index(i, (j + shift) % g.n_phi())];
  const CurvatureField f0 = compute_curvature(sf, speed_by_name("mean_curvature"), state);
  const CurvatureField f1 = compute_curvature(sf, speed_by_name("mean_curvature"), rotated);
  for (int i = 0; i < g.n_theta(); ++i)
    for (int j = 0; j < g.n_phi(); ++j) {
      CHECK(f1.lambda1[g.index(i, j)] == f0.lambda1[g.index(i, (j + shift) % g.n_phi())]);
      CHECK(f1.F[g.index(i, j)] == f0.F[g.index(i, (j + shift) % g.n_phi())]);
    }
}

TEST_CASE("pinching identity F/(2 beta) <= l1 <= F/2 <= l2 <= beta F/2 nodewise") {
  const auto state = perturbed_sphere(32, 64, 1.0, 0.1);
  const SpaceForm sf(0);
  for (const char* name : {"mean_curvature", "quadratic_mean", "geometric_mean",
                           "harmonic_mean", "cubic_mean"}) {
    const CurvatureField f = compute_curvature(sf, speed_by_name(name), state);
    for (std::size_t k = 0; k < state.u.size(); ++k) {
      const double l1 = f.lambda1[k], l2 = f.lambda2[k], F = f.F[k];
      const double beta = l2 / l1;
      CHECK(F / (2 * beta) <= l1 + 1e-9);
      CHECK(l1 <= F / 2 + 1e-9);
      CHECK(F / 2 <= l2 + 1e-9);
      CHECK(l2 <= beta * F / 2 + 1e-9);
    }
  }
}

TEST_CASE("G lies in [0,1) on convex surfaces and vanishes exactly on spheres") {
  const SpaceForm sf(0);
  const auto sphere = grid_state(16, 32, [](double, double) { return 1.3; });
  const CurvatureField fs = compute_curvature(sf, speed_by_name("mean_curvature"), sphere);
  for (std::size_t k = 0; k < sphere.u.size(); ++k)
    CHECK(fs.lambda1[k] == fs.lambda2[k]);

  const auto state = perturbed_sphere(32, 64, 1.0, 0.1);
  const CurvatureField f = compute_curvature(sf, speed_by_name("mean_curvature"), state);
  for (std::size_t k = 0; k < state.u.size(); ++k) {
    const double d = f.lambda1[k] - f.lambda2[k], s = f.lambda1[k] + f.lambda2[k];
    const double G = d * d / (s * s);
    CHECK(G >= 0.0);
    CHECK(G < 1.0);
  }
}

TEST_CASE("euclidean curvature matches a fundamental-forms oracle on the embedding") {
  // independent route: embed X = u * omega(theta,phi) in R^3, difference the
  // embedding itself, and read the shape operator from the classical first
  // and second fundamental forms. Shares nothing with the graph formulas
  // except the u samples.
  const int nt = 48, np = 96;
  auto grid = std::make_shared<SphericalGrid>(nt, np);
  SurfaceState state;
  state.u.resize(grid->size());
  auto profile = [](double th, double ph) {
    const double c = std::cos(th), s = std::sin(th);
    return 1.0 + 0.08 * c * c + 0.05 * s * s * std::cos(2 * ph) + 0.03 * s * std::cos(th) * std::sin(ph);
  };
  for (int i = 0; i < nt; ++i)
    for (int j = 0; j < np; ++j)
      state.u[grid->index(i, j)] = profile(grid->theta(i), grid->phi(j));
  state.grid = grid;
  const CurvatureField c = compute_curvature(SpaceForm(0), speed_by_name("mean_curvature"), state);

  const double dth = grid->dtheta(), dph = grid->dphi();
  auto embed = [&](double th, double ph, double* x) {
    const double u = profile(th, ph);
    x[0] = u * std::sin(th) * std::cos(ph);
    x[1] = u * std::sin(th) * std::sin(ph);
    x[2] = u * std::cos(th);
  };
  double worst = 0.0;
  for (int i = 2; i < nt - 2; ++i) {
    for (int j = 0; j < np; j += 3) {
      const double th = grid->theta(i), ph = grid->phi(j);
      double xc[3], x_tp[3], x_tm[3], x_pp[3], x_pm[3], x_a[3], x_b[3], x_c[3], x_d[3];
      embed(th, ph, xc);
      embed(th + dth, ph, x_tp);
      embed(th - dth, ph, x_tm);
      embed(th, ph + dph, x_pp);
      embed(th, ph - dph, x_pm);
      embed(th + dth, ph + dph, x_a);
      embed(th + dth, ph - dph, x_b);
      embed(th - dth, ph + dph, x_c);
      embed(th - dth, ph - dph, x_d);
      double Xt[3], Xp[3], Xtt[3], Xpp[3], Xtp[3];
      for (int d = 0; d < 3; ++d) {
        Xt[d] = (x_tp[d] - x_tm[d]) / (2 * dth);
        Xp[d] = (x_pp[d] - x_pm[d]) / (2 * dph);
        Xtt[d] = (x_tp[d] - 2 * xc[d] + x_tm[d]) / (dth * dth);
        Xpp[d] = (x_pp[d] - 2 * xc[d] + x_pm[d]) / (dph * dph);
        Xtp[d] = (x_a[d] - x_b[d] - x_c[d] + x_d[d]) / (4 * dth * dph);
      }
      auto dot = [](const double* a, const double* b) {
        return a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
      };
      double n[3] = {Xt[1] * Xp[2] - Xt[2] * Xp[1], Xt[2] * Xp[0] - Xt[0] * Xp[2],
                     Xt[0] * Xp[1] - Xt[1] * Xp[0]};
      const double nn = std::sqrt(dot(n, n));
      for (double& d : n) d /= nn;
      if (dot(n, xc) < 0.0)
        for (double& d : n) d = -d;  // outward
      const double E = dot(Xt, Xt), Fq = dot(Xt, Xp), G = dot(Xp, Xp);
      const double L = -dot(Xtt, n), M = -dot(Xtp, n), N2 = -dot(Xpp, n);
      const double det_g = E * G - Fq * Fq;
      // shape = II * I^{-1} with the outer-normal sign convention
      const double s11 = (L * G - M * Fq) / det_g;
      const double s12 = (M * E - L * Fq) / det_g;
      const double s21 = (M * G - N2 * Fq) / det_g;
      const double s22 = (N2 * E - M * Fq) / det_g;
      const double tr = s11 + s22, dt2 = s11 * s22 - s12 * s21;
      const double rt = std::sqrt(std::max(tr * tr - 4 * dt2, 0.0));
      const double l1 = 0.5 * (tr - rt), l2 = 0.5 * (tr + rt);
      const std::size_t k = grid->index(i, j);
      worst = std::max(worst, std::abs(l1 / c.lambda1[k] - 1.0));
      worst = std::max(worst, std::abs(l2 / c.lambda2[k] - 1.0));
    }
  }
  CHECK(worst < 5e-3);
}

TEST_CASE("random smooth graphs satisfy the structural inequalities") {
  // hand-rolled generator: low-frequency harmonics with LCG coefficients
  std::uint64_t lcg = 0x9e3779b97f4a7c15ull;
  auto next_unit = [&lcg] {
    lcg = lcg * 6364136223846793005ull + 1442695040888963407ull;
    return static_cast<double>(lcg >> 11) / 9007199254740992.0;  // [0,1)
  };
  for (int trial = 0; trial < 10; ++trial) {
    const double a1 = 0.12 * (next_unit() - 0.5);
    const double a2 = 0.12 * (next_unit() - 0.5);
    const double a3 = 0.12 * (next_unit() - 0.5);
    const double phase = 2 * M_PI * next_unit();
    const int kappa = trial % 2 == 0 ? 0 : -1;
    const SpaceForm sf(kappa);
    auto grid = std::make_shared<SphericalGrid>(24, 48);
    SurfaceState state;
    state.u.resize(grid->size());
    for (int i = 0; i < grid->n_theta(); ++i) {
      const double th = grid->theta(i);
      for (int j = 0; j < grid->n_phi(); ++j) {
        const double ph = grid->phi(j);
        state.u[grid->index(i, j)] =
            1.5 + a1 * std::cos(th) + a2 * std::cos(th) * std::cos(th) +
            a3 * std::sin(th) * std::sin(th) * std::cos(2 * ph + phase);
      }
    }
    state.grid = grid;
    for (const auto& f : speed_registry()) {
      CurvatureField c;
      try {
        c = compute_curvature(sf, f, state);
      } catch (const ConeViolation&) {
        continue;  // pinched-cone speeds may reject a trial shape
      }
      for (std::size_t k = 0; k < state.u.size(); ++k) {
        CHECK(c.v[k] >= 1.0);
        CHECK(c.chi[k] > 0.0);
        CHECK(c.lambda1[k] <= c.lambda2[k]);
        const double beta = c.lambda2[k] / c.lambda1[k];
        CHECK(c.F[k] / (2 * beta) <= c.lambda1[k] + 1e-9);
        CHECK(c.lambda1[k] <= c.F[k] / 2 + 1e-9);
        CHECK(c.F[k] / 2 <= c.lambda2[k] + 1e-9);
        CHECK(c.lambda2[k] <= beta * c.F[k] / 2 + 1e-9);
      }
    }
  }
}

TEST_CASE("cone violation propagates from the speed function") {
  // wildly sloped surface in S^3 beyond the hemisphere loses convexity
  const SpaceForm sf(1);
  auto state = grid_state(16, 32, [](double th, double) { return 2.0 + 0.8 * std::cos(th); });
  CHECK_THROWS_AS(compute_curvature(sf, speed_by_name("quadratic_mean"), state),
                  ConeViolation);
}

TEST_CASE("serial and openmp backends agree bitwise") {
  const auto state = grid_state(24, 48, [](double th, double ph) {
    return 1.0 + 0.07 * std::cos(th) * std::cos(th) +
           0.05 * std::sin(th) * std::sin(th) * std::cos(2 * ph);
  });
  const SpaceForm sf(-1);
  const auto& f = speed_by_name("mean_curvature");
  const CurvatureField a = compute_curvature(sf, f, state, Backend::serial);
  const CurvatureField b = compute_curvature(sf, f, state, Backend::openmp);
  for (std::size_t k = 0; k < state.u.size(); ++k) {
    CHECK(a.lambda1[k] == b.lambda1[k]);
    CHECK(a.lambda2[k] == b.lambda2[k]);
    CHECK(a.F[k] == b.F[k]);
    CHECK(a.chi[k] == b.chi[k]);
  }

  std::vector<double> rs, rp;
  const FlowKernelResult ks = flow_rhs(sf, f, 0.5, state, rs, Backend::serial);
  const FlowKernelResult kp = flow_rhs(sf, f, 0.5, state, rp, Backend::openmp);
  CHECK(ks.ok());
  CHECK(kp.ok());
  CHECK(ks.min_dt_unscaled == kp.min_dt_unscaled);
  for (std::size_t k = 0; k < rs.size(); ++k) CHECK(rs[k] == rp[k]);
}

TEST_CASE("fused kernel agrees with the reference curvature path") {
  const auto state = grid_state(24, 48, [](double th, double ph) {
    return 2.0 + 0.1 * std::cos(th) * std::cos(th) + 0.04 * std::sin(th) * std::cos(ph);
  });
  for (int kappa : {0, -1}) {
    const SpaceForm sf(kappa);
    for (const char* name : {"mean_curvature", "quadratic_mean"}) {
      const auto& f = speed_by_name(name);
      const double alpha = 0.5;
      const CurvatureField c = compute_curvature(sf, f, state);
      std::vector<double> r;
      const FlowKernelResult kr = flow_rhs(sf, f, alpha, state, r, Backend::serial);
      CHECK(kr.ok());
      for (std::size_t k = 0; k < state.u.size(); ++k) {
        const double expected = c.v[k] * std::pow(c.F[k], -alpha);
        CHECK(r[k] == doctest::Approx(expected).epsilon(1e-12));
      }
    }
  }
}
