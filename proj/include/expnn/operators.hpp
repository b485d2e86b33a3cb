#pragma once

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "expnn/common.hpp"
#include "expnn/density.hpp"

namespace expnn {

// Log-Holder data: |f(x) - f(y)| <= H |log x - log y|^lambda on the domain.
struct LogHolder {
  double H = 1.0;
  double lambda = 1.0;
};

struct FunctionTags {
  bool bounded = false;
  bool continuous = false;
  bool c2 = false;  // twice continuously differentiable in log coordinates
  std::optional<LogHolder> log_holder;
};

// Real-valued target on the positive half-line. The domain interval scopes
// norms, sweep grids and the E_n sample range; eval itself must stay finite
// for every x > 0 the quasi-interpolation window can reach.
struct FunctionHandle {
  std::string name;
  std::function<double(double)> eval;
  Interval domain;
  FunctionTags tags;
};

enum class OperatorFamily { en, qn, en_multivariate, sw };

// scale is n for E_n / Q_n / multivariate (validated integral >= 1) and the
// real w > 0 for S_w. window is the truncation half-width K of the
// bi-infinite families; dimension applies to the multivariate operator.
struct OperatorConfig {
  OperatorFamily family = OperatorFamily::en;
  DensityKernel kernel;
  double scale = 1.0;
  int window = 50;
  int dimension = 1;
};

// Truncated series value plus a bound on the discarded mass.
struct TruncatedValue {
  double value = 0.0;
  double truncation_estimate = 0.0;
};

// E_n(f, x) = sum_k f(e^{k/n}) chi(e^{-k} x^n) / sum_k chi(e^{-k} x^n),
// k in [ceil(n log a), floor(n log b)]. Requires x in the domain; throws
// ScaleTooSmallError when the index range is empty.
double nn_eval(const OperatorConfig& cfg, const FunctionHandle& f, double x);

// Q_n(f, x) = sum_k f(e^{k/n}) chi(e^{-k} x^n), bi-infinite series truncated
// to |k - n log x| <= window. Requires x > 0; non-finite samples surface as
// evaluation errors.
TruncatedValue quasi_eval(const OperatorConfig& cfg, const FunctionHandle& f,
                          double x);

// S_w: same un-normalized series at a real scale w > 0, nodes e^{k/w}.
TruncatedValue classical_eval(const OperatorConfig& cfg,
                              const FunctionHandle& f, double x);

// Multivariate E_n with the product kernel prod_i chi(e^{-k_i} x_i^n) over
// the box domain^N; the univariate handle enters as the product
// f(x_1)...f(x_N). The general N-variate core is exposed separately.
double nn_eval_multi(const OperatorConfig& cfg, const FunctionHandle& f,
                     std::span<const double> x);
double nn_eval_multi(const OperatorConfig& cfg,
                     const std::function<double(std::span<const double>)>& f,
                     const Interval& axis_domain, std::span<const double> x);

// Memoized E_n sweep evaluator: the samples f(e^{k/n}) are computed once and
// reused at every x of a grid sweep. Thread-safe after construction.
class EnEvaluator {
 public:
  EnEvaluator(const DensityKernel& kernel, int n, const FunctionHandle& f);

  double operator()(double x) const;

  long k_lo() const { return k_lo_; }
  long k_hi() const { return k_hi_; }

 private:
  DensityKernel kernel_;
  int n_;
  Interval domain_;
  long k_lo_ = 0;
  long k_hi_ = 0;
  std::vector<double> samples_;
};

// Lattice index range [ceil(n log a), floor(n log b)] shared by E_n and the
// denominator; throws ScaleTooSmallError when empty.
struct SampleRange {
  long lo = 0;
  long hi = 0;
};
SampleRange sample_range(double scale, const Interval& domain);

}  // namespace expnn
