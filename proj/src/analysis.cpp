#include "expnn/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace expnn {

namespace {

constexpr double kGridSupSafety = 1.01;

void require_unit_interval(double nu, const char* who) {
  if (!(nu > 0.0 && nu < 1.0)) {
    throw std::invalid_argument(std::string(who) + ": nu must lie in (0, 1)");
  }
}

void require_tanh(const DensityKernel& kernel, const char* who) {
  if (!kernel.has_closed_form()) {
    throw std::invalid_argument(
        std::string(who) +
        ": bound constants are specific to the tanh kernel; got '" +
        kernel.sigmoid().name + "'");
  }
}

void require_scale(int n, const char* who) {
  if (n < 1) {
    throw std::invalid_argument(std::string(who) + ": scale n must be >= 1");
  }
}

// theta^2 f as a handle over the stencil-safe interior of f's domain, for
// feeding back into log_modulus.
FunctionHandle second_mellin_handle(const FunctionHandle& f) {
  const double margin = 4e-4;  // > 2x the order-2 step
  Interval interior{f.domain.lo * std::exp(margin),
                    f.domain.hi * std::exp(-margin)};
  if (!interior.valid()) {
    throw std::invalid_argument(
        "bound_theorem4: domain too narrow for the derivative stencil");
  }
  FunctionHandle g;
  g.name = f.name + "_theta2";
  g.eval = [f](double x) { return mellin_derivative(f, x, 2).value; };
  g.domain = interior;
  g.tags.bounded = true;
  g.tags.continuous = true;
  return g;
}

BoundReport make_report(TheoremTag tag, int n, double nu, double bound,
                        double measured) {
  BoundReport report;
  report.theorem = tag;
  report.n = n;
  report.nu = nu;
  report.bound = bound;
  report.measured_sup_error = measured;
  report.satisfied = measured <= bound + 1e-10;
  return report;
}

}  // namespace

ModulusEstimate log_modulus(const FunctionHandle& f, double delta, int grid) {
  if (!(delta > 0.0)) {
    throw std::invalid_argument("log_modulus: delta must be > 0");
  }
  if (grid < 100) {
    throw std::invalid_argument("log_modulus: grid must be >= 100");
  }
  require_valid(f.domain, "log_modulus");
  const std::vector<double> xs = log_grid(f.domain, grid);
  // Symmetric shift grid including 0 and the extreme shifts +/-delta, where
  // the sup of |f(x) - f(x e^s)| is attained for monotone moduli.
  constexpr int kShifts = 33;
  double sup = 0.0;
  for (double x : xs) {
    const double fx = f.eval(x);
    for (int i = 0; i < kShifts; ++i) {
      const double s =
          -delta + 2.0 * delta * static_cast<double>(i) / (kShifts - 1);
      const double y = x * std::exp(s);
      if (!f.domain.contains(y)) continue;
      sup = std::max(sup, std::abs(fx - f.eval(y)));
    }
  }
  return {delta, sup, grid};
}

MellinDerivative mellin_derivative(const FunctionHandle& f, double x,
                                   int order) {
  if (order < 1 || order > 4) {
    throw std::invalid_argument("mellin_derivative: order must be in 1..4");
  }
  require_valid(f.domain, "mellin_derivative");
  if (!(x > f.domain.lo && x < f.domain.hi)) {
    throw std::domain_error("mellin_derivative: x not strictly inside domain");
  }
  // Steps balance truncation against rounding for each stencil order.
  static constexpr double kStep[] = {6e-6, 1e-4, 1e-3, 1e-2};
  const double h = kStep[order - 1];
  const int reach = order <= 2 ? 1 : 2;
  const double t = std::log(x);
  const double ta = std::log(f.domain.lo);
  const double tb = std::log(f.domain.hi);
  if (t - reach * h <= ta || t + reach * h >= tb) {
    throw std::domain_error(
        "mellin_derivative: stencil does not fit inside the domain at x=" +
        std::to_string(x));
  }
  const auto g = [&f](double s) { return f.eval(std::exp(s)); };
  double value = 0.0;
  switch (order) {
    case 1:
      value = (g(t + h) - g(t - h)) / (2.0 * h);
      break;
    case 2:
      value = (g(t + h) - 2.0 * g(t) + g(t - h)) / (h * h);
      break;
    case 3:
      value = (g(t + 2 * h) - 2.0 * g(t + h) + 2.0 * g(t - h) - g(t - 2 * h)) /
              (2.0 * h * h * h);
      break;
    default:
      value = (g(t + 2 * h) - 4.0 * g(t + h) + 6.0 * g(t) - 4.0 * g(t - h) +
               g(t - 2 * h)) /
              (h * h * h * h);
      break;
  }
  return {order, x, value, h};
}

double theorem2_bound(double holder_H, double lambda, double sup_norm,
                      double moment_sup, double kernel_at_e, int n) {
  // I1 + I2 split of the Holder estimate with the free delta fixed at 1:
  // (H M_lambda n^-lambda + 2 ||f|| M_lambda n^-lambda) / chi(e).
  const double decay = std::pow(static_cast<double>(n), -lambda);
  return (holder_H + 2.0 * sup_norm) * moment_sup * decay / kernel_at_e;
}

double theorem6_bound(double omega_value, double sup_norm, int n, double nu) {
  return omega_value + kDoubledTailConstant * sup_norm *
                           std::pow(static_cast<double>(n), nu - 1.0);
}

double theorem3_bound(double omega_value, double sup_norm, int n, double nu) {
  // Exactly the theorem-6 expression scaled by 1/chi(e) rounded to 4.14925.
  return kInverseFloorConstant * theorem6_bound(omega_value, sup_norm, n, nu);
}

double theorem4_bound(double theta1_norm, double theta2_norm,
                      double omega_theta2, int n, double nu, double width) {
  const double nd = static_cast<double>(n);
  const double tail = kTailConstant * std::pow(nd, nu - 1.0);
  const double term1 = theta1_norm * (std::pow(nd, -nu) + width * tail);
  const double term2 =
      0.5 * theta2_norm * (std::pow(nd, -2.0 * nu) + width * width * tail);
  const double term3 = 0.5 * omega_theta2 * std::pow(nd, -2.0 * nu);
  // The trailing theta2 tail term repeats mass already present in term2;
  // kept as displayed in the source estimate (still a valid upper bound).
  const double term4 = tail * theta2_norm * width * width;
  return kInverseFloorConstant * (term1 + term2 + term3 + term4);
}

BoundReport bound_theorem2(const FunctionHandle& f, const DensityKernel& kernel,
                           int n, std::optional<double> measured_sup) {
  require_scale(n, "bound_theorem2");
  if (!f.tags.log_holder) {
    throw std::invalid_argument("bound_theorem2: '" + f.name +
                                "' lacks the log_holder tag");
  }
  const LogHolder holder = *f.tags.log_holder;
  const double sup_norm = kGridSupSafety * sup_norm_estimate(f);
  const double moment_sup = sup_absolute_moment(kernel, holder.lambda);
  const double bound = theorem2_bound(holder.H, holder.lambda, sup_norm,
                                      moment_sup, kernel.value_at_e(), n);
  const double measured =
      measured_sup ? *measured_sup : measure_en_error(kernel, f, n).sup;
  return make_report(TheoremTag::t2, n, holder.lambda, bound, measured);
}

BoundReport bound_theorem3(const FunctionHandle& f, const DensityKernel& kernel,
                           int n, double nu,
                           std::optional<double> measured_sup) {
  require_scale(n, "bound_theorem3");
  require_unit_interval(nu, "bound_theorem3");
  require_tanh(kernel, "bound_theorem3");
  if (!f.tags.continuous) {
    throw std::invalid_argument("bound_theorem3: '" + f.name +
                                "' lacks the continuous tag");
  }
  const double sup_norm = kGridSupSafety * sup_norm_estimate(f);
  const double delta = std::pow(static_cast<double>(n), -nu);
  const double omega = log_modulus(f, delta, 2001).value;
  const double bound = theorem3_bound(omega, sup_norm, n, nu);
  const double measured =
      measured_sup ? *measured_sup : measure_en_error(kernel, f, n).sup;
  return make_report(TheoremTag::t3, n, nu, bound, measured);
}

BoundReport bound_theorem4(const FunctionHandle& f, const DensityKernel& kernel,
                           int n, double nu,
                           std::optional<double> measured_sup) {
  require_scale(n, "bound_theorem4");
  require_unit_interval(nu, "bound_theorem4");
  require_tanh(kernel, "bound_theorem4");
  if (!f.tags.c2) {
    throw std::invalid_argument("bound_theorem4: '" + f.name +
                                "' lacks the c2 tag");
  }
  const double theta1 = mellin_norm_estimate(f, 1);
  const double theta2 = mellin_norm_estimate(f, 2);
  const FunctionHandle theta2_handle = second_mellin_handle(f);
  const double delta = std::pow(static_cast<double>(n), -nu);
  const double omega2 = log_modulus(theta2_handle, delta, 501).value;
  const double bound = theorem4_bound(theta1, theta2, omega2, n, nu,
                                      f.domain.width());
  const double measured =
      measured_sup ? *measured_sup : measure_en_error(kernel, f, n).sup;
  return make_report(TheoremTag::t4, n, nu, bound, measured);
}

BoundReport bound_theorem6(const FunctionHandle& f, const DensityKernel& kernel,
                           int n, double nu, Interval window,
                           std::optional<double> measured_sup,
                           int truncation_window) {
  require_scale(n, "bound_theorem6");
  require_unit_interval(nu, "bound_theorem6");
  require_tanh(kernel, "bound_theorem6");
  require_valid(window, "bound_theorem6");
  if (!f.tags.continuous || !f.tags.bounded) {
    throw std::invalid_argument("bound_theorem6: '" + f.name +
                                "' must be tagged bounded and continuous");
  }
  // The modulus and sup norm belong to f on its own declared domain; the
  // window only scopes where the quasi-interpolation error is measured.
  const double sup_norm = kGridSupSafety * sup_norm_estimate(f);
  const double delta = std::pow(static_cast<double>(n), -nu);
  const double omega = log_modulus(f, delta, 2001).value;
  const double bound = theorem6_bound(omega, sup_norm, n, nu);
  const double measured =
      measured_sup
          ? *measured_sup
          : measure_qn_error(kernel, f, n, window, 501, truncation_window).sup;
  return make_report(TheoremTag::t6, n, nu, bound, measured);
}

RateFit fit_rate(
    const std::vector<std::pair<double, double>>& errors_by_scale) {
  RateFit fit;
  for (const auto& [scale, error] : errors_by_scale) {
    if (!(scale > 0.0) || !std::isfinite(error) || !(error > 0.0)) continue;
    fit.scales.push_back(scale);
    fit.errors.push_back(error);
  }
  if (fit.scales.size() < 4) {
    throw std::invalid_argument(
        "fit_rate: fewer than 4 usable (scale, error) points");
  }
  const auto [min_it, max_it] =
      std::minmax_element(fit.scales.begin(), fit.scales.end());
  if (*max_it < 10.0 * *min_it) {
    throw std::invalid_argument(
        "fit_rate: scales must span at least one decade");
  }
  const size_t m = fit.scales.size();
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (size_t i = 0; i < m; ++i) {
    const double lx = std::log(fit.scales[i]);
    const double ly = std::log(fit.errors[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  const double md = static_cast<double>(m);
  fit.slope = (md * sxy - sx * sy) / (md * sxx - sx * sx);
  fit.intercept = (sy - fit.slope * sx) / md;
  double ss_res = 0.0, ss_tot = 0.0;
  const double mean_y = sy / md;
  for (size_t i = 0; i < m; ++i) {
    const double lx = std::log(fit.scales[i]);
    const double ly = std::log(fit.errors[i]);
    const double r = ly - (fit.intercept + fit.slope * lx);
    ss_res += r * r;
    ss_tot += (ly - mean_y) * (ly - mean_y);
  }
  fit.r_squared = ss_tot > 0.0 ? 1.0 - ss_res / ss_tot : 1.0;
  return fit;
}

ErrorStats measure_en_error(const DensityKernel& kernel,
                            const FunctionHandle& f, int n, int grid_points) {
  const EnEvaluator op(kernel, n, f);
  const std::vector<double> xs = log_grid(f.domain, grid_points);
  ErrorStats stats;
  double acc = 0.0;
  for (double x : xs) {
    const double err = std::abs(op(x) - f.eval(x));
    stats.sup = std::max(stats.sup, err);
    acc += err;
  }
  stats.mean = acc / static_cast<double>(xs.size());
  return stats;
}

ErrorStats measure_qn_error(const DensityKernel& kernel,
                            const FunctionHandle& f, int n, Interval window,
                            int grid_points, int truncation_window) {
  require_valid(window, "measure_qn_error");
  OperatorConfig cfg{OperatorFamily::qn, kernel, static_cast<double>(n),
                     truncation_window, 1};
  const std::vector<double> xs = log_grid(window, grid_points);
  ErrorStats stats;
  double acc = 0.0;
  for (double x : xs) {
    const double err = std::abs(quasi_eval(cfg, f, x).value - f.eval(x));
    stats.sup = std::max(stats.sup, err);
    acc += err;
  }
  stats.mean = acc / static_cast<double>(xs.size());
  return stats;
}

double sup_norm_estimate(const FunctionHandle& f, int grid_points) {
  const std::vector<double> xs = log_grid(f.domain, grid_points);
  double sup = 0.0;
  for (double x : xs) sup = std::max(sup, std::abs(f.eval(x)));
  return sup;
}

double mellin_norm_estimate(const FunctionHandle& f, int order,
                            int grid_points) {
  // Stencil-safe interior: reach of the order-1/2 stencils is 1e-4 in t.
  const double margin = 4e-4;
  Interval interior{f.domain.lo * std::exp(margin),
                    f.domain.hi * std::exp(-margin)};
  if (!interior.valid()) {
    throw std::invalid_argument(
        "mellin_norm_estimate: domain too narrow for the stencil");
  }
  const std::vector<double> xs = log_grid(interior, grid_points);
  double sup = 0.0;
  for (double x : xs) {
    sup = std::max(sup, std::abs(mellin_derivative(f, x, order).value));
  }
  return kGridSupSafety * sup;
}

}  // namespace expnn
