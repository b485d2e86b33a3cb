#include "expnn/sigmoids.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace expnn {

namespace {

double logistic(double x) {
  // Branch keeps exp() away from overflow for large |x|.
  if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

double tanh_sigmoid(double x) { return 0.5 * (1.0 + std::tanh(x)); }

// Integral of the order-1 cardinal B-spline: a ramp from 0 to 1 on [-1/2, 1/2].
double ramp_bspline1(double x) {
  if (x <= -0.5) return 0.0;
  if (x >= 0.5) return 1.0;
  return x + 0.5;
}

// Integral of the order-2 cardinal B-spline: C^1 piecewise quadratic on [-1, 1].
double smooth_bspline2(double x) {
  if (x <= -1.0) return 0.0;
  if (x >= 1.0) return 1.0;
  if (x < 0.0) {
    const double s = 1.0 + x;
    return 0.5 * s * s;
  }
  const double s = 1.0 - x;
  return 1.0 - 0.5 * s * s;
}

const std::array<SigmoidSpec, 4>& catalogue() {
  static const std::array<SigmoidSpec, 4> table = {{
      {"logistic", logistic, 1.0, SmoothnessClass::c2},
      {"tanh", tanh_sigmoid, 1.0, SmoothnessClass::c2},
      {"bspline1", ramp_bspline1, 1.0, SmoothnessClass::piecewise},
      {"bspline2", smooth_bspline2, 1.0, SmoothnessClass::c1},
  }};
  return table;
}

// Least-squares slope of y against x; caller guarantees >= 2 points.
double ls_slope(const std::vector<double>& xs, const std::vector<double>& ys) {
  const double n = static_cast<double>(xs.size());
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (size_t i = 0; i < xs.size(); ++i) {
    sx += xs[i];
    sy += ys[i];
    sxx += xs[i] * xs[i];
    sxy += xs[i] * ys[i];
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace

double eval_sigmoid(const SigmoidSpec& spec, double x) {
  if (!std::isfinite(x)) {
    throw std::domain_error("eval_sigmoid: non-finite argument for '" +
                            spec.name + "'");
  }
  return spec.eval(x);
}

ConditionReport check_conditions(const SigmoidSpec& spec, double grid_extent,
                                 int samples) {
  if (!(grid_extent >= 4.0)) {
    throw std::invalid_argument("check_conditions: grid_extent must be >= 4");
  }
  if (samples < 16) {
    throw std::invalid_argument("check_conditions: samples must be >= 16");
  }

  ConditionReport report;

  // Condition (1): concavity on the positive half-line via centered second
  // differences. Tolerance = 1e-8 plus the unavoidable rounding allowance
  // ~eps/h^2 of the stencil (sigma saturates at 1, so absolute rounding of
  // each evaluation is ~1 ulp of 1).
  if (spec.smoothness == SmoothnessClass::piecewise) {
    report.concavity = CheckOutcome::not_applicable;
    report.max_second_difference = std::numeric_limits<double>::quiet_NaN();
  } else {
    const double h = 1e-4;
    const double tol =
        1e-8 + 32.0 * std::numeric_limits<double>::epsilon() / (h * h);
    double worst = -std::numeric_limits<double>::infinity();
    for (int i = 1; i <= samples; ++i) {
      const double x =
          grid_extent * static_cast<double>(i) / static_cast<double>(samples);
      if (x - h <= 0.0) continue;
      const double d2 =
          (spec.eval(x + h) - 2.0 * spec.eval(x) + spec.eval(x - h)) / (h * h);
      worst = std::max(worst, d2);
    }
    report.max_second_difference = worst;
    report.concavity = worst <= tol ? CheckOutcome::pass : CheckOutcome::fail;
  }

  // Condition (2): polynomial left-tail decay, slope of log sigma(-x) against
  // log x over [extent/2, extent]. A tail that has already underflowed to
  // (essentially) zero is compactly supported: faster than any polynomial.
  {
    const int pts = std::min(samples, 64);
    std::vector<double> lx, ly;
    lx.reserve(static_cast<size_t>(pts));
    ly.reserve(static_cast<size_t>(pts));
    const double x0 = grid_extent / 2.0;
    for (int i = 0; i < pts; ++i) {
      const double x =
          x0 * std::exp(std::log(2.0) * static_cast<double>(i) /
                        static_cast<double>(pts - 1));
      const double v = spec.eval(-x);
      if (v > 1e-300) {
        lx.push_back(std::log(x));
        ly.push_back(std::log(v));
      }
    }
    if (lx.size() < 2) {
      report.decay_slope = -std::numeric_limits<double>::infinity();
      report.decay = CheckOutcome::pass;
    } else {
      report.decay_slope = ls_slope(lx, ly);
      const double required = -(1.0 + spec.decay_nu) + 0.1;
      report.decay =
          report.decay_slope <= required ? CheckOutcome::pass : CheckOutcome::fail;
    }
  }

  // Condition (3): sigma(x) - 1/2 odd, i.e. sigma(x) + sigma(-x) = 1.
  {
    double dev = 0.0;
    for (int i = 0; i <= samples; ++i) {
      const double x =
          grid_extent * static_cast<double>(i) / static_cast<double>(samples);
      dev = std::max(dev, std::abs(spec.eval(x) + spec.eval(-x) - 1.0));
    }
    report.odd_symmetry_deviation = dev;
    report.odd_symmetry = dev < 1e-10 ? CheckOutcome::pass : CheckOutcome::fail;
  }

  report.overall = report.concavity != CheckOutcome::fail &&
                   report.decay == CheckOutcome::pass &&
                   report.odd_symmetry == CheckOutcome::pass;
  return report;
}

const SigmoidSpec& sigmoid_by_name(std::string_view name) {
  for (const auto& s : catalogue()) {
    if (s.name == name) return s;
  }
  throw std::out_of_range("unknown sigmoid '" + std::string(name) +
                          "'; known: logistic, tanh, bspline1, bspline2");
}

std::vector<std::string> sigmoid_names() {
  std::vector<std::string> names;
  names.reserve(catalogue().size());
  for (const auto& s : catalogue()) names.push_back(s.name);
  return names;
}

}  // namespace expnn
