#include "icf/geometry.hpp"

#include <array>
#include <cmath>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace icf {

Backend default_backend() {
#ifdef _OPENMP
  return Backend::openmp;
#else
  return Backend::serial;
#endif
}

namespace {

// Extended copy of u with one ghost row across each pole (half-turn shift in
// longitude) and one periodic ghost column on each side.
void build_extended(const SphericalGrid& g, const std::vector<double>& u,
                    std::vector<double>& ext) {
  const int nt = g.n_theta(), np = g.n_phi();
  const int W = np + 2;
  ext.resize(static_cast<std::size_t>(nt + 2) * W);
  auto E = [&](int i, int j) -> double& { return ext[static_cast<std::size_t>(i) * W + j]; };
  for (int i = 0; i < nt; ++i)
    for (int j = 0; j < np; ++j) E(i + 1, j + 1) = u[g.index(i, j)];
  const int half = np / 2;
  for (int j = 0; j < np; ++j) {
    E(0, j + 1) = u[g.index(0, (j + half) % np)];
    E(nt + 1, j + 1) = u[g.index(nt - 1, (j + half) % np)];
  }
  for (int i = 0; i < nt + 2; ++i) {
    E(i, 0) = E(i, np);
    E(i, np + 1) = E(i, 1);
  }
}

}  // namespace

DerivField differentiate(const SphericalGrid& g, const std::vector<double>& u) {
  const int nt = g.n_theta(), np = g.n_phi();
  const int W = np + 2;
  const double dth = g.dtheta(), dph = g.dphi();
  std::vector<double> ext;
  build_extended(g, u, ext);

  DerivField d;
  d.du_theta.resize(g.size());
  d.du_phi.resize(g.size());
  d.hess_tt.resize(g.size());
  d.hess_tp.resize(g.size());
  d.hess_pp.resize(g.size());

  for (int i = 0; i < nt; ++i) {
    const double st = g.sin_theta()[i], ct = g.cos_theta()[i];
    const double cot = ct / st;
    const double* rm = &ext[static_cast<std::size_t>(i) * W + 1];      // row above
    const double* rc = &ext[static_cast<std::size_t>(i + 1) * W + 1];  // this row
    const double* rp = &ext[static_cast<std::size_t>(i + 2) * W + 1];  // row below
    for (int j = 0; j < np; ++j) {
      const std::size_t k = g.index(i, j);
      const double ut = (rp[j] - rm[j]) / (2 * dth);
      const double up = (rc[j + 1] - rc[j - 1]) / (2 * dph);
      const double utt = (rp[j] - 2 * rc[j] + rm[j]) / (dth * dth);
      const double upp = (rc[j + 1] - 2 * rc[j] + rc[j - 1]) / (dph * dph);
      const double utp = (rp[j + 1] - rp[j - 1] - rm[j + 1] + rm[j - 1]) / (4 * dth * dph);
      d.du_theta[k] = ut;
      d.du_phi[k] = up;
      // Christoffel terms of the round metric in (theta, phi) coordinates.
      d.hess_tt[k] = utt;
      d.hess_tp[k] = utp - cot * up;
      d.hess_pp[k] = upp + st * ct * ut;
    }
  }
  return d;
}

namespace {

struct NodeStatus {
  int domain = 0;
  int cone = 0;
  int nonfinite = 0;
};

// Straightforward per-node evaluation used by compute_curvature. Eigenvalues
// of the Weingarten matrix come from the symmetrized similar matrix
// g^(1/2) W g^(-1/2), which is symmetric because W = g^(-1) h with h
// symmetric, so the spectrum is real by construction.
void curvature_at_node(int kappa, const SpeedFunction& f, bool enforce_cone, double u, double ut,
                       double up, double htt, double htp, double hpp, double st,
                       CurvatureField& out, std::size_t k, NodeStatus& status) {
  const double domain_max = kappa == 1 ? M_PI : std::numeric_limits<double>::infinity();
  if (!(u > 0.0 && u < domain_max)) {
    status.domain = 1;
    return;
  }
  double s, sp;
  switch (kappa) {
    case 0: s = u; sp = 1.0; break;
    case 1: s = std::sin(u); sp = std::cos(u); break;
    default: s = std::sinh(u); sp = std::cosh(u); break;
  }
  const double st2 = st * st;
  const double du2 = ut * ut + up * up / st2;
  const double v = std::sqrt(1.0 + du2 / (s * s));

  out.g_tt[k] = ut * ut + s * s;
  out.g_tp[k] = ut * up;
  out.g_pp[k] = up * up + s * s * st2;
  out.v[k] = v;
  out.chi[k] = s / v;

  // phi_i = u_i / s, with the sigma-covariant Hessian rewritten in u.
  const double pt = ut / s, pp = up / s;
  const double ctt = htt / s - sp * ut * ut / (s * s);
  const double ctp = htp / s - sp * ut * up / (s * s);
  const double cpp = hpp / s - sp * up * up / (s * s);
  const double iv2 = 1.0 / (v * v);
  const double att = 1.0 - pt * pt * iv2;
  const double atp = -pt * (pp / st2) * iv2;
  const double app = 1.0 / st2 - (pp / st2) * (pp / st2) * iv2;
  const double ivs = 1.0 / (v * s);
  const double w_tt = (-(att * ctt + atp * ctp) + sp) * ivs;
  const double w_tp = (-(att * ctp + atp * cpp)) * ivs;
  const double w_pt = (-(atp * ctt + app * ctp)) * ivs;
  const double w_pp = (-(atp * ctp + app * cpp) + sp) * ivs;
  out.h_tt[k] = w_tt;
  out.h_tp[k] = w_tp;
  out.h_pt[k] = w_pt;
  out.h_pp[k] = w_pp;

  // 2x2 SPD square root of g in closed form.
  const double tau = out.g_tt[k] + out.g_pp[k];
  const double detg = out.g_tt[k] * out.g_pp[k] - out.g_tp[k] * out.g_tp[k];
  const double sd = std::sqrt(detg);
  const double tt = std::sqrt(tau + 2.0 * sd);
  const double r11 = (out.g_tt[k] + sd) / tt, r12 = out.g_tp[k] / tt;
  const double r22 = (out.g_pp[k] + sd) / tt;
  const double detr = r11 * r22 - r12 * r12;
  const double i11 = r22 / detr, i12 = -r12 / detr, i22 = r11 / detr;
  // M = R * W * R^{-1}
  const double a11 = r11 * w_tt + r12 * w_pt, a12 = r11 * w_tp + r12 * w_pp;
  const double a21 = r12 * w_tt + r22 * w_pt, a22 = r12 * w_tp + r22 * w_pp;
  const double m11 = a11 * i11 + a12 * i12;
  const double m12 = a11 * i12 + a12 * i22;
  const double m21 = a21 * i11 + a22 * i12;
  const double m22 = a21 * i12 + a22 * i22;
  const double b = 0.5 * (m12 + m21);
  const double mid = 0.5 * (m11 + m22);
  double rad = std::sqrt(0.25 * (m11 - m22) * (m11 - m22) + b * b);
  // eigenvalue gaps below roundoff scale are exact umbilics
  if (rad <= 1e-12 * std::max(1.0, std::abs(mid))) rad = 0.0;
  const double l1 = mid - rad, l2 = mid + rad;
  out.lambda1[k] = l1;
  out.lambda2[k] = l2;

  if (!f.in_cone(l1, l2)) {
    status.cone = 1;
    if (enforce_cone) {
      out.F[k] = std::numeric_limits<double>::quiet_NaN();
      return;
    }
  }
  const double F = f.eval_fn(l1, l2);
  out.F[k] = F;
  if (enforce_cone && (!std::isfinite(F) || !std::isfinite(v))) status.nonfinite = 1;
}

}  // namespace

namespace {

CurvatureField curvature_sweep(const SpaceForm& sf, const SpeedFunction& f,
                               const SurfaceState& state, Backend backend, bool enforce_cone) {
  const auto& g = *state.grid;
  const std::size_t n = g.size();
  CurvatureField out;
  for (auto* vec : {&out.g_tt, &out.g_tp, &out.g_pp, &out.v, &out.h_tt, &out.h_tp, &out.h_pt,
                    &out.h_pp, &out.lambda1, &out.lambda2, &out.F, &out.chi})
    vec->resize(n);

  const DerivField d = differentiate(g, state.u);
  const int nt = g.n_theta(), np = g.n_phi();
  const int kappa = sf.kappa();
  int domain_flag = 0, cone_flag = 0, nan_flag = 0;

#ifdef _OPENMP
#pragma omp parallel for schedule(static) reduction(| : domain_flag, cone_flag, nan_flag) \
    if (backend == Backend::openmp)
#endif
  for (int i = 0; i < nt; ++i) {
    NodeStatus status;
    const double st = g.sin_theta()[i];
    for (int j = 0; j < np; ++j) {
      const std::size_t k = g.index(i, j);
      curvature_at_node(kappa, f, enforce_cone, state.u[k], d.du_theta[k], d.du_phi[k],
                        d.hess_tt[k], d.hess_tp[k], d.hess_pp[k], st, out, k, status);
    }
    domain_flag |= status.domain;
    cone_flag |= status.cone;
    nan_flag |= status.nonfinite;
  }

  if (domain_flag) throw RadialDomainError("compute_curvature: u outside radial domain");
  if (enforce_cone && cone_flag)
    throw ConeViolation("compute_curvature: surface left the admissible cone of '" + f.name + "'");
  if (nan_flag) throw NumericalBlowup("compute_curvature: non-finite curvature");
  return out;
}

}  // namespace

CurvatureField compute_curvature(const SpaceForm& sf, const SpeedFunction& f,
                                 const SurfaceState& state, Backend backend) {
  return curvature_sweep(sf, f, state, backend, true);
}

CurvatureField compute_curvature_unchecked(const SpaceForm& sf, const SpeedFunction& f,
                                           const SurfaceState& state, Backend backend) {
  return curvature_sweep(sf, f, state, backend, false);
}

SurfaceIntegrals area_and_integrals(const SpaceForm& sf, const SurfaceState& state,
                                    const CurvatureField& field, double alpha) {
  const auto& g = *state.grid;
  const std::size_t n = g.size();
  // sqrt(det g) = s^2 v sin(theta), so the measure per node is
  // s^2 v * node_weight with the round area element already in the weight.
  std::vector<double> w_area(n), w_asq(n), w_fpow(n);
  for (int i = 0; i < g.n_theta(); ++i) {
    const double wq = g.node_weight(i);
    for (int j = 0; j < g.n_phi(); ++j) {
      const std::size_t k = g.index(i, j);
      const double s = sf.warp(state.u[k]);
      const double dmu = s * s * field.v[k] * wq;
      const double dl = field.lambda1[k] - field.lambda2[k];
      w_area[k] = dmu;
      w_asq[k] = 0.5 * dl * dl * dmu;
      w_fpow[k] = std::pow(field.F[k], 1.0 - alpha) * dmu;
    }
  }
  SurfaceIntegrals out;
  out.area = pairwise_sum(w_area.data(), n);
  out.asq_integral = pairwise_sum(w_asq.data(), n);
  out.f_pow_integral = pairwise_sum(w_fpow.data(), n);
  return out;
}

// ---------------------------------------------------------------------------
// Fused stepping kernel.
// ---------------------------------------------------------------------------

namespace {

// cone_bad takes the sorted pair a <= b and must stay branch-free so the
// stepping loop vectorizes; bitwise | instead of short-circuiting.
struct SpMean {
  static int cone_bad(double a, double b) { return !(a + b > 0.0); }
  static double eval(double a, double b) { return a + b; }
  static double gradsum(double, double) { return 2.0; }
};
struct SpPmM1 {
  static int cone_bad(double a, double b) { return int(!(a > 0.0)) | int(!(b > 0.0)); }
  static double eval(double a, double b) { return 4.0 * a * b / (a + b); }
  static double gradsum(double a, double b) {
    const double s = a + b;
    return 4.0 * (a * a + b * b) / (s * s);
  }
};
struct SpPm2 {
  static int cone_bad(double a, double b) { return int(!(a > 0.0)) | int(!(b > 0.0)); }
  static double eval(double a, double b) { return std::sqrt(2.0 * (a * a + b * b)); }
  static double gradsum(double a, double b) { return 2.0 * (a + b) / eval(a, b); }
};
struct SpPm3 {
  static int cone_bad(double a, double b) { return int(!(a > 0.0)) | int(!(b > 0.0)); }
  static double eval(double a, double b) { return 2.0 * std::cbrt(0.5 * (a * a * a + b * b * b)); }
  static double gradsum(double a, double b) {
    const double m = 0.5 * (a * a * a + b * b * b);
    const double c = std::cbrt(m);
    return (a * a + b * b) / (c * c);
  }
};
struct SpGeo {
  static int cone_bad(double a, double b) { return int(!(a > 0.0)) | int(!(b > 0.0)); }
  static double eval(double a, double b) { return 2.0 * std::sqrt(a * b); }
  static double gradsum(double a, double b) { return (a + b) / std::sqrt(a * b); }
};
struct SpRatio {
  static int cone_bad(double a, double b) {
    const double lim = 2.4142135623730951;  // 1 + sqrt(2)
    return int(!(a > 0.0)) | int(!(b < lim * a));
  }
  static double eval(double a, double b) { return 2.0 * (a * a + b * b) / (a + b); }
  static double gradsum(double a, double b) {
    const double s = a + b;
    return 8.0 * a * b / (s * s);
  }
};

enum class AlphaCase { one, half, generic };

inline AlphaCase classify_alpha(double alpha) {
  if (alpha == 1.0) return AlphaCase::one;
  if (alpha == 0.5) return AlphaCase::half;
  return AlphaCase::generic;
}

template <int KAPPA, class SP, AlphaCase AC>
FlowKernelResult rhs_kernel(const SphericalGrid& g, const std::vector<double>& u, double alpha,
                            std::vector<double>& rhs, bool parallel) {
  const int nt = g.n_theta(), np = g.n_phi();
  const int W = np + 2;
  const double dth = g.dtheta(), dph = g.dphi();
  const double i2dth = 1.0 / (2 * dth), i2dph = 1.0 / (2 * dph);
  const double idth2 = 1.0 / (dth * dth), idph2 = 1.0 / (dph * dph);
  const double i4dtp = 1.0 / (4 * dth * dph);
  const double domain_max = KAPPA == 1 ? M_PI : std::numeric_limits<double>::infinity();

  std::vector<double> ext;  // built once here, read-only inside the parallel sweep
  build_extended(g, u, ext);
  rhs.resize(g.size());

  int domain_flag = 0, cone_flag = 0;
  double dt_min = std::numeric_limits<double>::infinity();

#ifdef _OPENMP
#pragma omp parallel for schedule(static) reduction(| : domain_flag, cone_flag) \
    reduction(min : dt_min) if (parallel)
#endif
  for (int i = 0; i < nt; ++i) {
    const double st = g.sin_theta()[i], ct = g.cos_theta()[i];
    const double cot = ct / st;
    const double ist2 = 1.0 / (st * st);
    const double minfac = std::min(dth, st * dph);
    const double* rm = &ext[static_cast<std::size_t>(i) * W + 1];
    const double* rc = &ext[static_cast<std::size_t>(i + 1) * W + 1];
    const double* rp = &ext[static_cast<std::size_t>(i + 2) * W + 1];
    double* out = &rhs[g.index(i, 0)];
    int dflag = 0, cflag = 0;
    double rowmin = std::numeric_limits<double>::infinity();
#ifdef _OPENMP
#pragma omp simd reduction(| : dflag, cflag) reduction(min : rowmin)
#endif
    for (int j = 0; j < np; ++j) {
      const double uc = rc[j];
      dflag |= int(!(uc > 0.0)) | int(!(uc < domain_max));
      const double ut = (rp[j] - rm[j]) * i2dth;
      const double up = (rc[j + 1] - rc[j - 1]) * i2dph;
      const double utt = (rp[j] - 2 * uc + rm[j]) * idth2;
      const double upp = (rc[j + 1] - 2 * uc + rc[j - 1]) * idph2;
      const double utp = (rp[j + 1] - rp[j - 1] - rm[j + 1] + rm[j - 1]) * i4dtp;
      const double htt = utt;
      const double htp = utp - cot * up;
      const double hpp = upp + st * ct * ut;

      double s, sp;
      if constexpr (KAPPA == 0) {
        s = uc; sp = 1.0;
      } else if constexpr (KAPPA == 1) {
        s = std::sin(uc); sp = std::cos(uc);
      } else {
        s = std::sinh(uc); sp = std::cosh(uc);
      }
      const double is = 1.0 / s;
      const double pt = ut * is, pp = up * is;
      const double v2 = 1.0 + (pt * pt + pp * pp * ist2);
      const double v = std::sqrt(v2);
      const double iv2 = 1.0 / v2;
      const double iv = v * iv2;  // 1/v without a further division
      const double ctt = (htt - sp * ut * pt) * is;
      const double ctp = (htp - sp * ut * pp) * is;
      const double cpp = (hpp - sp * up * pp) * is;
      const double att = 1.0 - pt * pt * iv2;
      const double atp = -pt * pp * ist2 * iv2;
      const double app = ist2 - pp * ist2 * pp * ist2 * iv2;
      const double ivs = iv * is;
      const double w11 = (-(att * ctt + atp * ctp) + sp) * ivs;
      const double w12 = (-(att * ctp + atp * cpp)) * ivs;
      const double w21 = (-(atp * ctt + app * ctp)) * ivs;
      const double w22 = (-(atp * ctp + app * cpp) + sp) * ivs;
      const double tr = w11 + w22;
      const double det = w11 * w22 - w12 * w21;
      const double disc = std::max(tr * tr - 4.0 * det, 0.0);
      const double rt = std::sqrt(disc);
      const double l1 = 0.5 * (tr - rt), l2 = 0.5 * (tr + rt);

      cflag |= SP::cone_bad(l1, l2);
      const double F = SP::eval(l1, l2);
      double fma_pow, fma_pow1;  // F^{-alpha}, F^{-alpha-1}
      if constexpr (AC == AlphaCase::one) {
        fma_pow = 1.0 / F;
        fma_pow1 = fma_pow * fma_pow;
      } else if constexpr (AC == AlphaCase::half) {
        fma_pow = 1.0 / std::sqrt(F);
        fma_pow1 = fma_pow / F;
      } else {
        fma_pow = std::pow(F, -alpha);
        fma_pow1 = fma_pow / F;
      }
      out[j] = v * fma_pow;
      const double dl = s * minfac * iv;
      const double diffusivity = alpha * fma_pow1 * SP::gradsum(l1, l2);
      rowmin = std::min(rowmin, dl * dl / diffusivity);
    }
    // finiteness checked per row so the inner loop stays branch-light
    for (int j = 0; j < np; ++j) dflag |= !std::isfinite(out[j]);
    domain_flag |= dflag;
    cone_flag |= cflag;
    dt_min = std::min(dt_min, rowmin);
  }

  FlowKernelResult res;
  res.cone_violation = cone_flag != 0;
  res.min_dt_unscaled = dt_min;
  if (domain_flag) {
    // the flag covers both domain escapes and non-finite rhs; classify now
    bool dom = false;
    for (double uv : u)
      if (!(uv > 0.0 && uv < domain_max)) {
        dom = true;
        break;
      }
    res.domain_violation = dom;
    res.nonfinite = !dom && !res.cone_violation;
  }
  return res;
}

template <int KAPPA, class SP>
FlowKernelResult dispatch_alpha(const SphericalGrid& g, const std::vector<double>& u, double alpha,
                                std::vector<double>& rhs, bool parallel) {
  switch (classify_alpha(alpha)) {
    case AlphaCase::one:
      return rhs_kernel<KAPPA, SP, AlphaCase::one>(g, u, alpha, rhs, parallel);
    case AlphaCase::half:
      return rhs_kernel<KAPPA, SP, AlphaCase::half>(g, u, alpha, rhs, parallel);
    default:
      return rhs_kernel<KAPPA, SP, AlphaCase::generic>(g, u, alpha, rhs, parallel);
  }
}

template <int KAPPA>
FlowKernelResult dispatch_speed(const SphericalGrid& g, const SpeedFunction& f,
                                const std::vector<double>& u, double alpha,
                                std::vector<double>& rhs, bool parallel) {
  switch (f.kind) {
    case SpeedKind::mean_curvature:
      return dispatch_alpha<KAPPA, SpMean>(g, u, alpha, rhs, parallel);
    case SpeedKind::power_mean_m1:
      return dispatch_alpha<KAPPA, SpPmM1>(g, u, alpha, rhs, parallel);
    case SpeedKind::power_mean_p2:
      return dispatch_alpha<KAPPA, SpPm2>(g, u, alpha, rhs, parallel);
    case SpeedKind::power_mean_p3:
      return dispatch_alpha<KAPPA, SpPm3>(g, u, alpha, rhs, parallel);
    case SpeedKind::geometric_mean:
      return dispatch_alpha<KAPPA, SpGeo>(g, u, alpha, rhs, parallel);
    case SpeedKind::sum_squares_ratio:
      return dispatch_alpha<KAPPA, SpRatio>(g, u, alpha, rhs, parallel);
    default:
      throw std::invalid_argument("flow_rhs: custom speed functions are not steppable");
  }
}

}  // namespace

FlowKernelResult flow_rhs(const SpaceForm& sf, const SpeedFunction& f, double alpha,
                          const SurfaceState& state, std::vector<double>& rhs_out,
                          Backend backend) {
  const bool parallel = backend == Backend::openmp;
  switch (sf.kappa()) {
    case 0:
      return dispatch_speed<0>(*state.grid, f, state.u, alpha, rhs_out, parallel);
    case 1:
      return dispatch_speed<1>(*state.grid, f, state.u, alpha, rhs_out, parallel);
    default:
      return dispatch_speed<-1>(*state.grid, f, state.u, alpha, rhs_out, parallel);
  }
}

}  // namespace icf
