#pragma once

#include <functional>
#include <string>
#include <string_view>
#include <vector>

namespace expnn {

// Smoothness of the activation, as relevant to the condition checks:
// the concavity test is meaningless for a piecewise-linear ramp.
enum class SmoothnessClass { c2, c1, piecewise };

// A sigmoidal activation sigma: R -> [0,1], non-decreasing,
// sigma(-inf) = 0, sigma(+inf) = 1, with sigma(x) - 1/2 odd.
struct SigmoidSpec {
  std::string name;
  std::function<double(double)> eval;
  // Exponent nu > 0 of the assumed tail bound sigma(-x) = O(x^{-(1+nu)}).
  double decay_nu = 1.0;
  SmoothnessClass smoothness = SmoothnessClass::c2;
};

enum class CheckOutcome { pass, fail, not_applicable };

// Numeric verdicts for the three admissibility conditions:
//   (1) concave on (0, inf)          [n/a for piecewise ramps]
//   (2) sigma(-x) = O(x^{-(1+nu)})   as x -> +inf
//   (3) sigma(x) - 1/2 is odd
struct ConditionReport {
  CheckOutcome concavity = CheckOutcome::fail;
  CheckOutcome decay = CheckOutcome::fail;
  CheckOutcome odd_symmetry = CheckOutcome::fail;
  // Log-log slope of the left tail; -inf for compactly supported ramps.
  double decay_slope = 0.0;
  double odd_symmetry_deviation = 0.0;
  double max_second_difference = 0.0;
  bool overall = false;
};

// Evaluates spec.eval(x); rejects non-finite x.
double eval_sigmoid(const SigmoidSpec& spec, double x);

// Checks conditions (1)-(3) on grids spanning [-grid_extent, grid_extent].
// Requires grid_extent >= 4 and samples >= 16.
ConditionReport check_conditions(const SigmoidSpec& spec, double grid_extent,
                                 int samples);

// Built-in catalogue: "logistic", "tanh", "bspline1", "bspline2".
// Unknown names throw std::out_of_range.
const SigmoidSpec& sigmoid_by_name(std::string_view name);
std::vector<std::string> sigmoid_names();

}  // namespace expnn
