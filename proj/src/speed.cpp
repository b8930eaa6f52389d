#include "icf/speed.hpp"

#include <cmath>
#include <limits>

namespace icf {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double eval_mean(double a, double b) { return a + b; }
void grad_mean(double, double, double* g1, double* g2) { *g1 = 1.0; *g2 = 1.0; }

// Normalized power mean 2*((a^p + b^p)/2)^(1/p).
template <int P>
double eval_pm(double a, double b) {
  if constexpr (P == -1) {
    return 4.0 * a * b / (a + b);
  } else if constexpr (P == 2) {
    return std::sqrt(2.0 * (a * a + b * b));
  } else {
    const double m = 0.5 * (std::pow(a, P) + std::pow(b, P));
    return 2.0 * std::pow(m, 1.0 / P);
  }
}

template <int P>
void grad_pm(double a, double b, double* g1, double* g2) {
  if constexpr (P == -1) {
    const double s = a + b;
    *g1 = 4.0 * b * b / (s * s);
    *g2 = 4.0 * a * a / (s * s);
  } else if constexpr (P == 2) {
    const double r = std::sqrt(2.0 * (a * a + b * b));
    *g1 = 2.0 * a / r;
    *g2 = 2.0 * b / r;
  } else {
    // dF/da = ((a^p+b^p)/2)^((1-p)/p) * a^(p-1)
    const double m = 0.5 * (std::pow(a, P) + std::pow(b, P));
    const double c = std::pow(m, (1.0 - P) / static_cast<double>(P));
    *g1 = c * std::pow(a, P - 1);
    *g2 = c * std::pow(b, P - 1);
  }
}

double eval_geo(double a, double b) { return 2.0 * std::sqrt(a * b); }
void grad_geo(double a, double b, double* g1, double* g2) {
  *g1 = std::sqrt(b / a);
  *g2 = std::sqrt(a / b);
}

// 2(a^2+b^2)/(a+b); monotone only while max/min < 1+sqrt(2).
double eval_ratio(double a, double b) { return 2.0 * (a * a + b * b) / (a + b); }
void grad_ratio(double a, double b, double* g1, double* g2) {
  const double s2 = (a + b) * (a + b);
  *g1 = 2.0 * (a * a + 2.0 * a * b - b * b) / s2;
  *g2 = 2.0 * (b * b + 2.0 * a * b - a * a) / s2;
}

double eval_broken(double a, double b) { return a + 2.0 * b; }
void grad_broken(double, double, double* g1, double* g2) { *g1 = 1.0; *g2 = 2.0; }

std::vector<SpeedFunction> make_registry() {
  std::vector<SpeedFunction> r;
  r.push_back({"mean_curvature", SpeedKind::mean_curvature, eval_mean, grad_mean,
               /*requires_full_convexity=*/false, kInf});
  r.push_back({"harmonic_mean", SpeedKind::power_mean_m1, eval_pm<-1>, grad_pm<-1>, true, kInf});
  r.push_back({"quadratic_mean", SpeedKind::power_mean_p2, eval_pm<2>, grad_pm<2>, true, kInf});
  r.push_back({"cubic_mean", SpeedKind::power_mean_p3, eval_pm<3>, grad_pm<3>, true, kInf});
  r.push_back({"geometric_mean", SpeedKind::geometric_mean, eval_geo, grad_geo, true, kInf});
  // Strict monotonicity of the ratio fails once lambda2 > (1+sqrt(2)) lambda1,
  // so its admissible cone is the pinched sector below that ratio.
  r.push_back({"sum_squares_ratio", SpeedKind::sum_squares_ratio, eval_ratio, grad_ratio, true,
               1.0 + std::sqrt(2.0)});
  return r;
}

}  // namespace

bool SpeedFunction::in_cone(double l1, double l2) const {
  if (!std::isfinite(l1) || !std::isfinite(l2)) return false;
  if (!requires_full_convexity) return l1 + l2 > 0.0;
  if (!(l1 > 0.0 && l2 > 0.0)) return false;
  if (pinch_limit < kInf) {
    const double hi = std::max(l1, l2), lo = std::min(l1, l2);
    if (hi >= pinch_limit * lo) return false;
  }
  return true;
}

double eval_F(const SpeedFunction& f, double lambda1, double lambda2) {
  if (!f.in_cone(lambda1, lambda2))
    throw ConeViolation("speed '" + f.name + "': (" + std::to_string(lambda1) + ", " +
                        std::to_string(lambda2) + ") outside admissible cone");
  return f.eval_fn(lambda1, lambda2);
}

std::pair<double, double> grad_F(const SpeedFunction& f, double lambda1, double lambda2) {
  if (!f.in_cone(lambda1, lambda2))
    throw ConeViolation("speed '" + f.name + "': gradient outside admissible cone");
  double g1, g2;
  f.grad_fn(lambda1, lambda2, &g1, &g2);
  return {g1, g2};
}

const std::vector<SpeedFunction>& speed_registry() {
  static const std::vector<SpeedFunction> registry = make_registry();
  return registry;
}

const SpeedFunction& speed_by_name(std::string_view name) {
  for (const auto& f : speed_registry())
    if (f.name == name) return f;
  throw ConfigError("unknown speed function '" + std::string(name) + "'");
}

const SpeedFunction& broken_asymmetric_fixture() {
  static const SpeedFunction f{"broken_asymmetric", SpeedKind::custom, eval_broken,
                               grad_broken, true, kInf};
  return f;
}

ValidationReport validate_assumption(const SpeedFunction& f,
                                     std::span<const std::pair<double, double>> samples) {
  constexpr double kAlgebraicTol = 1e-10;
  constexpr double kGradientTol = 1e-6;
  constexpr double kFdStep = 1e-6;
  ValidationReport rep;
  rep.min_grad_component = kInf;

  rep.normalization_err = std::abs(f.eval_fn(1.0, 1.0) - 2.0);
  for (const auto& [a, b] : samples) {
    const double F = f.eval_fn(a, b);
    rep.max_symmetry_err = std::max(rep.max_symmetry_err, std::abs(F - f.eval_fn(b, a)));
    for (double k : {0.5, 2.0, 10.0}) {
      if (!f.in_cone(k * a, k * b)) continue;
      rep.max_homogeneity_err =
          std::max(rep.max_homogeneity_err, std::abs(f.eval_fn(k * a, k * b) - k * F) / (k * F));
    }
    double g1, g2;
    f.grad_fn(a, b, &g1, &g2);
    rep.min_grad_component = std::min({rep.min_grad_component, g1, g2});
    const double fd1 = (f.eval_fn(a + kFdStep, b) - f.eval_fn(a - kFdStep, b)) / (2 * kFdStep);
    const double fd2 = (f.eval_fn(a, b + kFdStep) - f.eval_fn(a, b - kFdStep)) / (2 * kFdStep);
    const double scale = std::max(std::abs(F), 1.0);
    rep.max_grad_fd_rel_err = std::max({rep.max_grad_fd_rel_err,
                                        std::abs(g1 - fd1) / scale,
                                        std::abs(g2 - fd2) / scale});
  }

  if (rep.max_symmetry_err > kAlgebraicTol) rep.violations.push_back("symmetry");
  if (rep.max_homogeneity_err > kAlgebraicTol) rep.violations.push_back("homogeneity");
  if (rep.normalization_err > kAlgebraicTol) rep.violations.push_back("normalization");
  if (!(rep.min_grad_component > 0.0)) rep.violations.push_back("monotonicity");
  if (rep.max_grad_fd_rel_err > kGradientTol) rep.violations.push_back("gradient");
  rep.passed = rep.violations.empty();
  return rep;
}

std::vector<std::pair<double, double>> halton_cone_samples(const SpeedFunction& f, int n,
                                                           double lo, double hi) {
  auto halton = [](int index, int base) {
    double r = 0.0, scale = 1.0 / base;
    for (int i = index; i > 0; i /= base) {
      r += (i % base) * scale;
      scale /= base;
    }
    return r;
  };
  std::vector<std::pair<double, double>> pts;
  pts.reserve(n);
  for (int i = 1; pts.size() < static_cast<size_t>(n) && i < 100000; ++i) {
    const double a = lo + (hi - lo) * halton(i, 2);
    const double b = lo + (hi - lo) * halton(i, 3);
    if (f.in_cone(a, b)) pts.emplace_back(a, b);
  }
  return pts;
}

void check_flow_exponent(double alpha, int kappa) {
  if (!(alpha > 0.0 && alpha <= 1.0))
    throw ConfigError("flow.alpha: must lie in (0,1], got " + std::to_string(alpha));
  if (kappa == 1 && alpha != 1.0)
    throw ConfigError("flow.alpha: kappa=+1 requires alpha=1");
}

}  // namespace icf
