#pragma once

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

namespace expnn {

// Thrown when a sample range [ceil(n*log a), floor(n*log b)] comes out empty,
// i.e. the scale n is too small for the interval to contain a lattice node.
struct ScaleTooSmallError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Closed interval [lo, hi] on the positive half-line, 0 < lo < hi.
struct Interval {
  double lo = 1.0;
  double hi = 2.0;

  double width() const { return hi - lo; }
  bool contains(double x) const { return x >= lo && x <= hi; }
  bool valid() const {
    return std::isfinite(lo) && std::isfinite(hi) && lo > 0.0 && lo < hi;
  }
};

inline void require_valid(const Interval& iv, const char* who) {
  if (!iv.valid()) {
    throw std::invalid_argument(std::string(who) +
                                ": interval must satisfy 0 < lo < hi");
  }
}

// Log-uniform grid with the endpoints pinned exactly to lo and hi, so that
// membership checks against the same interval never fail by rounding.
inline std::vector<double> log_grid(const Interval& iv, int points) {
  require_valid(iv, "log_grid");
  if (points < 2) throw std::invalid_argument("log_grid: need >= 2 points");
  std::vector<double> xs(static_cast<size_t>(points));
  const double ta = std::log(iv.lo);
  const double tb = std::log(iv.hi);
  for (int i = 1; i + 1 < points; ++i) {
    const double t = ta + (tb - ta) * static_cast<double>(i) /
                              static_cast<double>(points - 1);
    xs[static_cast<size_t>(i)] = std::exp(t);
  }
  xs.front() = iv.lo;
  xs.back() = iv.hi;
  return xs;
}

}  // namespace expnn
