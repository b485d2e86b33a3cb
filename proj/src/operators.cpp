#include "expnn/operators.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace expnn {

namespace {

void require_integral_scale(double scale, const char* who) {
  if (!(scale >= 1.0) || scale != std::floor(scale)) {
    throw std::invalid_argument(std::string(who) +
                                ": scale must be an integer >= 1");
  }
}

void require_family(const OperatorConfig& cfg, OperatorFamily want,
                    const char* who) {
  if (cfg.family != want) {
    throw std::invalid_argument(std::string(who) +
                                ": config built for a different family");
  }
}

double checked_sample(const FunctionHandle& f, double node) {
  const double v = f.eval(node);
  if (!std::isfinite(v)) {
    std::string msg = "sample f(" + std::to_string(node) + ") of '" + f.name +
                      "' is not finite";
    if (!f.tags.bounded) msg += " (handle lacks the bounded tag)";
    throw std::runtime_error(msg);
  }
  return v;
}

// Un-normalized truncated series shared by Q_n (integer n) and S_w (real w).
TruncatedValue truncated_series(const DensityKernel& kernel, double scale,
                                int window, const FunctionHandle& f,
                                double x) {
  if (!(x > 0.0)) {
    throw std::domain_error("quasi/classical eval: x must be positive");
  }
  if (window < 1) {
    throw std::invalid_argument("quasi/classical eval: window must be >= 1");
  }
  const double t = scale * std::log(x);
  const long k_lo = static_cast<long>(std::ceil(t - window - 1e-9));
  const long k_hi = static_cast<long>(std::floor(t + window + 1e-9));
  double acc = 0.0;
  double peak = 0.0;
  for (long k = k_lo; k <= k_hi; ++k) {
    const double node = std::exp(static_cast<double>(k) / scale);
    const double sample = checked_sample(f, node);
    acc += sample * kernel.log_eval(t - static_cast<double>(k));
    peak = std::max(peak, std::abs(sample));
  }
  // Discarded mass <= sup|f| * sum_{|j|>window} phi; the window peak stands
  // in for sup|f|, doubled to keep the estimate conservative.
  return {acc, 2.0 * peak * kernel.tail_envelope(window)};
}

}  // namespace

SampleRange sample_range(double scale, const Interval& domain) {
  require_valid(domain, "sample_range");
  // 1e-9 fuzz keeps lattice endpoints with integral n*log(a) inside the range.
  const long lo = static_cast<long>(std::ceil(scale * std::log(domain.lo) - 1e-9));
  const long hi = static_cast<long>(std::floor(scale * std::log(domain.hi) + 1e-9));
  if (lo > hi) {
    throw ScaleTooSmallError("sample_range: no lattice node in [" +
                             std::to_string(domain.lo) + ", " +
                             std::to_string(domain.hi) + "] at scale " +
                             std::to_string(scale));
  }
  return {lo, hi};
}

EnEvaluator::EnEvaluator(const DensityKernel& kernel, int n,
                         const FunctionHandle& f)
    : kernel_(kernel), n_(n), domain_(f.domain) {
  if (n < 1) throw std::invalid_argument("EnEvaluator: scale n must be >= 1");
  const SampleRange range = sample_range(static_cast<double>(n), domain_);
  k_lo_ = range.lo;
  k_hi_ = range.hi;
  samples_.reserve(static_cast<size_t>(k_hi_ - k_lo_ + 1));
  for (long k = k_lo_; k <= k_hi_; ++k) {
    samples_.push_back(
        checked_sample(f, std::exp(static_cast<double>(k) / n_)));
  }
}

double EnEvaluator::operator()(double x) const {
  if (!domain_.contains(x)) {
    throw std::domain_error("EnEvaluator: x outside [a, b]");
  }
  const double t = n_ * std::log(x);
  double num = 0.0, den = 0.0;
  for (long k = k_lo_; k <= k_hi_; ++k) {
    const double w = kernel_.log_eval(t - static_cast<double>(k));
    num += samples_[static_cast<size_t>(k - k_lo_)] * w;
    den += w;
  }
  // Lemma 2: den >= chi(e) > 0 for x in [a, b].
  return num / den;
}

double nn_eval(const OperatorConfig& cfg, const FunctionHandle& f, double x) {
  require_family(cfg, OperatorFamily::en, "nn_eval");
  require_integral_scale(cfg.scale, "nn_eval");
  const EnEvaluator op(cfg.kernel, static_cast<int>(cfg.scale), f);
  return op(x);
}

TruncatedValue quasi_eval(const OperatorConfig& cfg, const FunctionHandle& f,
                          double x) {
  require_family(cfg, OperatorFamily::qn, "quasi_eval");
  require_integral_scale(cfg.scale, "quasi_eval");
  return truncated_series(cfg.kernel, cfg.scale, cfg.window, f, x);
}

TruncatedValue classical_eval(const OperatorConfig& cfg,
                              const FunctionHandle& f, double x) {
  require_family(cfg, OperatorFamily::sw, "classical_eval");
  if (!(cfg.scale > 0.0)) {
    throw std::invalid_argument("classical_eval: scale w must be > 0");
  }
  return truncated_series(cfg.kernel, cfg.scale, cfg.window, f, x);
}

double nn_eval_multi(const OperatorConfig& cfg,
                     const std::function<double(std::span<const double>)>& f,
                     const Interval& axis_domain, std::span<const double> x) {
  require_family(cfg, OperatorFamily::en_multivariate, "nn_eval_multi");
  require_integral_scale(cfg.scale, "nn_eval_multi");
  const int dim = cfg.dimension;
  if (dim < 1) {
    throw std::invalid_argument("nn_eval_multi: dimension must be >= 1");
  }
  if (static_cast<int>(x.size()) != dim) {
    throw std::invalid_argument("nn_eval_multi: point has wrong dimension");
  }
  for (double xi : x) {
    if (!axis_domain.contains(xi)) {
      throw std::domain_error("nn_eval_multi: coordinate outside [a, b]");
    }
  }

  const SampleRange range = sample_range(cfg.scale, axis_domain);
  const long count = range.hi - range.lo + 1;
  const double n = cfg.scale;

  // Per-axis kernel weights; the product kernel factorizes so the
  // denominator is the product of the per-axis sums.
  std::vector<std::vector<double>> weights(static_cast<size_t>(dim));
  std::vector<double> nodes(static_cast<size_t>(count));
  for (long k = range.lo; k <= range.hi; ++k) {
    nodes[static_cast<size_t>(k - range.lo)] =
        std::exp(static_cast<double>(k) / n);
  }
  double den = 1.0;
  for (int axis = 0; axis < dim; ++axis) {
    auto& w = weights[static_cast<size_t>(axis)];
    w.resize(static_cast<size_t>(count));
    const double t = n * std::log(x[static_cast<size_t>(axis)]);
    double axis_sum = 0.0;
    for (long k = range.lo; k <= range.hi; ++k) {
      const double v = cfg.kernel.log_eval(t - static_cast<double>(k));
      w[static_cast<size_t>(k - range.lo)] = v;
      axis_sum += v;
    }
    den *= axis_sum;  // >= chi(e) per axis by Lemma 2
  }

  // Odometer over the N-fold lattice box.
  std::vector<long> idx(static_cast<size_t>(dim), 0);
  std::vector<double> point(static_cast<size_t>(dim));
  double num = 0.0;
  while (true) {
    double w = 1.0;
    for (int axis = 0; axis < dim; ++axis) {
      const long i = idx[static_cast<size_t>(axis)];
      w *= weights[static_cast<size_t>(axis)][static_cast<size_t>(i)];
      point[static_cast<size_t>(axis)] = nodes[static_cast<size_t>(i)];
    }
    const double sample = f(point);
    if (!std::isfinite(sample)) {
      throw std::runtime_error("nn_eval_multi: non-finite sample");
    }
    num += sample * w;
    int axis = 0;
    while (axis < dim && ++idx[static_cast<size_t>(axis)] == count) {
      idx[static_cast<size_t>(axis)] = 0;
      ++axis;
    }
    if (axis == dim) break;
  }
  return num / den;
}

double nn_eval_multi(const OperatorConfig& cfg, const FunctionHandle& f,
                     std::span<const double> x) {
  const auto product = [&f](std::span<const double> p) {
    double v = 1.0;
    for (double xi : p) v *= f.eval(xi);
    return v;
  };
  return nn_eval_multi(cfg, product, f.domain, x);
}

}  // namespace expnn
