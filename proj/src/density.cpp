#include "expnn/density.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace expnn {

namespace {

constexpr double kE4 = 54.598150033144236;  // e^4
constexpr double kE2 = 7.38905609893065;    // e^2

// d^nu with the conventions 0^0 = 1 and 0^nu = 0 (nu > 0); for non-integer
// nu and d < 0, the sign is carried algebraically: sgn(d) |d|^nu.
double signed_power(double d, double nu) {
  if (nu == 0.0) return 1.0;
  if (d == 0.0) return 0.0;
  if (nu == std::floor(nu)) return std::pow(d, nu);
  const double mag = std::pow(std::abs(d), nu);
  return d < 0.0 ? -mag : mag;
}

double abs_power(double d, double nu) {
  if (nu == 0.0) return 1.0;
  if (d == 0.0) return 0.0;
  return std::pow(std::abs(d), nu);
}

// Tail series sum_{j > window} sigma(1.5 - j) * (j + 1/2)^nu, evaluated with
// early exit once terms stop contributing. For the catalogue sigmoids the
// series collapses in a few dozen terms (exponential or compact tails); a
// polynomial tail that exhausts the iteration cap gets an integral-test
// remainder attached.
double tail_series(const SigmoidSpec& spec, int window, double nu) {
  double acc = 0.0;
  double term = 0.0;
  long j = window + 1;
  const long cap = j + 2000000;
  for (; j < cap; ++j) {
    const double s = spec.eval(1.5 - static_cast<double>(j));
    term = s * abs_power(static_cast<double>(j) + 0.5, nu);
    acc += term;
    if (term <= 1e-18 * (acc + 1e-300)) return acc;
  }
  // Remainder estimate for terms ~ j^{-(1 + decay_nu) + nu}.
  const double p = spec.decay_nu - nu;
  if (p <= 0.0) return std::numeric_limits<double>::infinity();
  return acc + term * static_cast<double>(j) / p;
}

}  // namespace

DensityKernel::DensityKernel(SigmoidSpec spec) : spec_(std::move(spec)) {
  if (!(spec_.decay_nu > 0.0)) {
    throw std::invalid_argument("DensityKernel: decay_nu must be > 0 for '" +
                                spec_.name + "'");
  }
  const ConditionReport report = check_conditions(spec_, 10.0, 200);
  if (report.decay != CheckOutcome::pass) {
    throw std::invalid_argument("DensityKernel: sigmoid '" + spec_.name +
                                "' fails the tail decay condition");
  }
  if (report.odd_symmetry != CheckOutcome::pass) {
    throw std::invalid_argument("DensityKernel: sigmoid '" + spec_.name +
                                "' fails the odd symmetry condition");
  }
  tanh_form_ = spec_.name == "tanh";
  value_at_e_ = log_eval(1.0);
  if (!(value_at_e_ > 0.0)) {
    throw std::invalid_argument("DensityKernel: sigmoid '" + spec_.name +
                                "' has chi(e) <= 0");
  }
}

double DensityKernel::operator()(double x) const {
  if (!(x > 0.0)) {
    throw std::domain_error("DensityKernel: argument must be positive");
  }
  return log_eval(std::log(x));
}

double DensityKernel::log_eval(double t) const {
  return 0.5 * (spec_.eval(t + 1.0) - spec_.eval(t - 1.0));
}

bool DensityKernel::has_closed_form() const { return tanh_form_; }

double DensityKernel::closed_form(double x) const {
  if (!tanh_form_) {
    throw std::logic_error("DensityKernel: no closed form for '" + spec_.name +
                           "'");
  }
  if (!(x > 0.0)) {
    throw std::domain_error("DensityKernel: argument must be positive");
  }
  const double x2 = x * x;
  return 0.5 * x2 * (kE4 - 1.0) / (x2 * (1.0 + kE4) + kE2 * (x2 * x2 + 1.0));
}

double DensityKernel::value_at_e() const { return value_at_e_; }

double DensityKernel::tail_envelope(int window) const {
  if (window < 0) {
    throw std::invalid_argument("tail_envelope: window must be >= 0");
  }
  return tail_series(spec_, window, 0.0);
}

DensityKernel make_kernel(const SigmoidSpec& spec) {
  return DensityKernel(spec);
}

DensityKernel kernel_by_name(std::string_view name) {
  return DensityKernel(sigmoid_by_name(name));
}

double partition_sum(const DensityKernel& kernel, double u, int window) {
  if (!(u > 0.0)) {
    throw std::domain_error("partition_sum: u must be positive");
  }
  if (window < 0) {
    throw std::invalid_argument("partition_sum: window must be >= 0");
  }
  const double t = std::log(u);
  const long c = std::llround(t);
  double acc = 0.0;
  for (long j = -window; j <= window; ++j) {
    acc += kernel.log_eval(t - static_cast<double>(c + j));
  }
  return acc;
}

double denominator_sum(const DensityKernel& kernel, double x, int n, double a,
                       double b) {
  if (!(a > 0.0 && a < b)) {
    throw std::invalid_argument("denominator_sum: need 0 < a < b");
  }
  if (n < 1) {
    throw std::invalid_argument("denominator_sum: scale n must be >= 1");
  }
  if (!(x >= a && x <= b)) {
    throw std::domain_error("denominator_sum: x outside [a, b]");
  }
  // 1e-9 fuzz keeps exact lattice endpoints (n log a integral) from being
  // rounded out of the range by floating-point noise.
  const long k_lo = static_cast<long>(std::ceil(n * std::log(a) - 1e-9));
  const long k_hi = static_cast<long>(std::floor(n * std::log(b) + 1e-9));
  if (k_lo > k_hi) {
    throw ScaleTooSmallError(
        "denominator_sum: no lattice node in [a, b] at scale n=" +
        std::to_string(n));
  }
  const double t = n * std::log(x);
  double acc = 0.0;
  for (long k = k_lo; k <= k_hi; ++k) {
    acc += kernel.log_eval(t - static_cast<double>(k));
  }
  return acc;
}

double tail_mass(const DensityKernel& kernel, double u, double threshold,
                 int window) {
  if (!(u > 0.0)) {
    throw std::domain_error("tail_mass: u must be positive");
  }
  if (!(threshold >= 0.0)) {
    throw std::invalid_argument("tail_mass: threshold must be >= 0");
  }
  if (window < 1) {
    throw std::invalid_argument("tail_mass: window must be >= 1");
  }
  const double t = std::log(u);
  const long c = std::llround(t);
  double acc = 0.0;
  for (long j = -window; j <= window; ++j) {
    const double k = static_cast<double>(c + j);
    if (std::abs(k - t) > threshold) acc += kernel.log_eval(t - k);
  }
  return acc;
}

MomentTable moments(const DensityKernel& kernel, double order,
                    std::span<const double> u_grid, int window) {
  if (!(order >= 0.0)) {
    throw std::invalid_argument("moments: order must be >= 0");
  }
  if (window < 1) {
    throw std::invalid_argument("moments: window must be >= 1");
  }
  MomentTable table;
  table.order = order;
  table.window = window;
  table.u_values.assign(u_grid.begin(), u_grid.end());
  table.algebraic.resize(u_grid.size());
  table.absolute.resize(u_grid.size());
  for (size_t i = 0; i < u_grid.size(); ++i) {
    const double u = u_grid[i];
    if (!(u > 0.0)) {
      throw std::domain_error("moments: u values must be positive");
    }
    const double t = std::log(u);
    const long c = std::llround(t);
    double alg = 0.0, abs_acc = 0.0;
    for (long j = -window; j <= window; ++j) {
      const double d = static_cast<double>(c + j) - t;
      const double w = kernel.log_eval(-d);
      alg += w * signed_power(d, order);
      abs_acc += w * abs_power(d, order);
    }
    table.algebraic[i] = alg;
    table.absolute[i] = abs_acc;
    table.sup_absolute = std::max(table.sup_absolute, abs_acc);
  }
  table.tail_estimate = tail_series(kernel.sigmoid(), window, order);
  return table;
}

double sup_absolute_moment(const DensityKernel& kernel, double order,
                           int window) {
  const std::vector<double> grid = log_grid({1.0, std::exp(1.0)}, 1001);
  return moments(kernel, order, grid, window).sup_absolute;
}

}  // namespace expnn
