#pragma once

#include <span>
#include <string_view>
#include <vector>

#include "expnn/common.hpp"
#include "expnn/sigmoids.hpp"

namespace expnn {

// Density kernel induced by a sigmoid:
//   chi(x) = (sigma(log x + 1) - sigma(log x - 1)) / 2 ,  x > 0.
// In the log variable, phi(t) = chi(e^t) is even, non-negative, has
// phi(t) <= sigma(1 - |t|)/2 in the tails, and sums to 1 over integer
// shifts: sum_k phi(t - k) = 1 for every t.
class DensityKernel {
 public:
  // Requires decay_nu > 0 and the spec to pass the decay and odd-symmetry
  // condition checks; throws std::invalid_argument otherwise.
  explicit DensityKernel(SigmoidSpec spec);

  // chi(x) for x > 0; throws std::domain_error otherwise.
  double operator()(double x) const;

  // phi(t) = chi(e^t) for finite t; evaluates the sigmoid directly,
  // avoiding the exp/log round trip.
  double log_eval(double t) const;

  // The tanh kernel admits a rational closed form in x; closed_form()
  // throws std::logic_error for every other sigmoid.
  bool has_closed_form() const;
  double closed_form(double x) const;

  // chi(e) = (sigma(2) - sigma(0))/2 > 0, the floor constant of the
  // normalizing denominator.
  double value_at_e() const;

  // Upper bound on sum_{|j| > window} phi(j + s), uniform over |s| <= 1/2:
  // sum_{j > window} sigma(1.5 - j). Used for truncation estimates.
  double tail_envelope(int window) const;

  const SigmoidSpec& sigmoid() const { return spec_; }

 private:
  SigmoidSpec spec_;
  bool tanh_form_ = false;
  double value_at_e_ = 0.0;
};

DensityKernel make_kernel(const SigmoidSpec& spec);
DensityKernel kernel_by_name(std::string_view name);

// sum_{j=-window}^{window} phi(log u - (c + j)) with c = round(log u).
// Approaches 1 as window grows (partition of unity). window >= 0.
double partition_sum(const DensityKernel& kernel, double u, int window);

// Finite normalizing denominator sum_{k=ceil(n log a)}^{floor(n log b)}
// chi(e^{-k} x^n). Bounded below by chi(e) for x in [a, b].
// Throws ScaleTooSmallError when the index range is empty.
double denominator_sum(const DensityKernel& kernel, double x, int n, double a,
                       double b);

// Mass of the kernel lattice away from log u:
// sum over |k - log u| > threshold, |k - round(log u)| <= window.
double tail_mass(const DensityKernel& kernel, double u, double threshold,
                 int window);

// Discrete moments of order nu >= 0 about log u:
//   algebraic[i] = sum_k chi(e^{-k} u_i) (k - log u_i)^nu
//   absolute[i]  = sum_k chi(e^{-k} u_i) |k - log u_i|^nu
// truncated to |k - round(log u_i)| <= window, with a tail estimate
// sum_{j > window} sigma(1.5 - j) (j + 1/2)^nu for what was dropped.
struct MomentTable {
  double order = 0.0;
  std::vector<double> u_values;
  std::vector<double> algebraic;
  std::vector<double> absolute;
  double sup_absolute = 0.0;
  int window = 0;
  double tail_estimate = 0.0;
};

MomentTable moments(const DensityKernel& kernel, double order,
                    std::span<const double> u_grid, int window);

// sup_u absolute moment of the given order; by log-periodicity the sup over
// u > 0 equals the sup over [1, e], scanned here on a 1001-point log grid.
double sup_absolute_moment(const DensityKernel& kernel, double order,
                           int window = 200);

}  // namespace expnn
