#include <cmath>
#include <limits>
#include <stdexcept>

#include "doctest.h"
#include "expnn/sigmoids.hpp"
#include "oracles.hpp"

using namespace expnn;

TEST_SUITE_BEGIN("sigmoids");

TEST_CASE("catalogue names and lookup") {
  const auto names = sigmoid_names();
  REQUIRE(names.size() == 4);
  CHECK(names[0] == "logistic");
  CHECK(names[1] == "tanh");
  CHECK(names[2] == "bspline1");
  CHECK(names[3] == "bspline2");
  for (const auto& name : names) {
    CHECK(sigmoid_by_name(name).name == name);
  }
  CHECK_THROWS_AS(sigmoid_by_name("gudermannian"), std::out_of_range);
  CHECK_THROWS_AS(sigmoid_by_name(""), std::out_of_range);
}

TEST_CASE("catalogue point values") {
  const auto& logistic = sigmoid_by_name("logistic");
  const auto& tanh_s = sigmoid_by_name("tanh");
  const auto& ramp = sigmoid_by_name("bspline1");
  const auto& quad = sigmoid_by_name("bspline2");

  CHECK(eval_sigmoid(logistic, 0.0) == 0.5);
  CHECK(eval_sigmoid(tanh_s, 2.0) == doctest::Approx(oracle::kSigmaTanhAt2).epsilon(1e-15));
  CHECK(eval_sigmoid(ramp, 0.0) == 0.5);
  CHECK(eval_sigmoid(ramp, -0.5) == 0.0);
  CHECK(eval_sigmoid(ramp, 0.5) == 1.0);
  CHECK(eval_sigmoid(ramp, -3.0) == 0.0);
  CHECK(eval_sigmoid(ramp, 3.0) == 1.0);
  CHECK(eval_sigmoid(quad, -1.0) == 0.0);
  CHECK(eval_sigmoid(quad, 0.0) == 0.5);
  CHECK(eval_sigmoid(quad, 1.0) == 1.0);
  CHECK(eval_sigmoid(quad, -0.5) == doctest::Approx(0.125).epsilon(1e-15));
  CHECK(eval_sigmoid(quad, 0.5) == doctest::Approx(0.875).epsilon(1e-15));
}

TEST_CASE("non-finite arguments rejected") {
  const auto& tanh_s = sigmoid_by_name("tanh");
  CHECK_THROWS_AS(eval_sigmoid(tanh_s, std::numeric_limits<double>::quiet_NaN()),
                  std::domain_error);
  CHECK_THROWS_AS(eval_sigmoid(tanh_s, std::numeric_limits<double>::infinity()),
                  std::domain_error);
}

TEST_CASE("monotone, saturating, odd-symmetric on a dense grid") {
  for (const auto& name : sigmoid_names()) {
    CAPTURE(name);
    const auto& spec = sigmoid_by_name(name);
    double prev = -1.0;
    double odd_dev = 0.0;
    for (int i = 0; i <= 1000; ++i) {
      const double x = -20.0 + 40.0 * i / 1000.0;
      const double v = eval_sigmoid(spec, x);
      CHECK(v >= 0.0);
      CHECK(v <= 1.0);
      CHECK(v >= prev - 1e-15);  // non-decreasing
      prev = v;
      odd_dev = std::max(odd_dev,
                         std::abs(spec.eval(x) + spec.eval(-x) - 1.0));
    }
    CHECK(odd_dev < 1e-12);
    CHECK(spec.eval(2.0) > spec.eval(0.0));
    CHECK(spec.eval(-20.0) < 1e-8);
    CHECK(spec.eval(20.0) > 1.0 - 1e-8);
  }
}

TEST_CASE("condition report: smooth catalogue entries pass everything") {
  for (const char* name : {"logistic", "tanh", "bspline2"}) {
    CAPTURE(name);
    const ConditionReport report =
        check_conditions(sigmoid_by_name(name), 10.0, 1000);
    CHECK(report.concavity == CheckOutcome::pass);
    CHECK(report.decay == CheckOutcome::pass);
    CHECK(report.odd_symmetry == CheckOutcome::pass);
    CHECK(report.overall);
    CHECK(report.odd_symmetry_deviation < 1e-12);
  }
}

TEST_CASE("condition report: ramp skips the concavity check") {
  const ConditionReport report =
      check_conditions(sigmoid_by_name("bspline1"), 10.0, 1000);
  CHECK(report.concavity == CheckOutcome::not_applicable);
  CHECK(report.decay == CheckOutcome::pass);
  // Compactly supported tail: slope reported as -inf.
  CHECK(std::isinf(report.decay_slope));
  CHECK(report.decay_slope < 0.0);
  CHECK(report.odd_symmetry == CheckOutcome::pass);
  CHECK(report.overall);
}

TEST_CASE("decay slopes of the exponential tails") {
  // sigma_l(-x) ~ e^-x and sigma_h(-x) ~ e^-2x: over [5, 10] the log-log
  // slope is far below the -(1 + nu) + 0.1 = -1.9 requirement.
  const auto logistic = check_conditions(sigmoid_by_name("logistic"), 10.0, 500);
  const auto tanh_r = check_conditions(sigmoid_by_name("tanh"), 10.0, 500);
  CHECK(logistic.decay_slope < -1.9);
  CHECK(tanh_r.decay_slope < logistic.decay_slope);  // twice the decay rate
}

TEST_CASE("condition check rejects a fat left tail") {
  // sigma(-x) = 1/(2(1+x)) decays like x^-1, too slow for decay_nu = 1.
  SigmoidSpec fat{"fat_tail",
                  [](double x) { return 0.5 * (1.0 + x / (1.0 + std::abs(x))); },
                  1.0,
                  SmoothnessClass::c2};
  const ConditionReport report = check_conditions(fat, 10.0, 500);
  CHECK(report.decay == CheckOutcome::fail);
  CHECK(report.decay_slope > -1.9);
  CHECK(report.odd_symmetry == CheckOutcome::pass);
  CHECK_FALSE(report.overall);
}

TEST_CASE("condition check flags broken odd symmetry") {
  SigmoidSpec shifted{"shifted_logistic",
                      [](double x) { return 1.0 / (1.0 + std::exp(-x - 1.0)); },
                      1.0,
                      SmoothnessClass::c2};
  const ConditionReport report = check_conditions(shifted, 10.0, 500);
  CHECK(report.odd_symmetry == CheckOutcome::fail);
  CHECK(report.odd_symmetry_deviation > 1e-3);
  CHECK_FALSE(report.overall);
}

TEST_CASE("condition check flags a convex bump") {
  // Convex for x in (0, 1): second differences are strongly positive there.
  SigmoidSpec convex{"cubic_wiggle",
                     [](double x) {
                       if (x <= -1.0) return 0.0;
                       if (x >= 1.0) return 1.0;
                       return 0.5 + 0.5 * x * x * x;
                     },
                     1.0,
                     SmoothnessClass::c1};
  const ConditionReport report = check_conditions(convex, 10.0, 500);
  CHECK(report.concavity == CheckOutcome::fail);
  CHECK(report.max_second_difference > 1e-4);
}

TEST_CASE("check_conditions parameter validation") {
  const auto& spec = sigmoid_by_name("tanh");
  CHECK_THROWS_AS(check_conditions(spec, 3.9, 1000), std::invalid_argument);
  CHECK_THROWS_AS(check_conditions(spec, 10.0, 15), std::invalid_argument);
  CHECK_NOTHROW(check_conditions(spec, 4.0, 16));
}

TEST_CASE("decay exponent stored for every catalogue entry") {
  for (const auto& name : sigmoid_names()) {
    CHECK(sigmoid_by_name(name).decay_nu == 1.0);
  }
  CHECK(sigmoid_by_name("bspline1").smoothness == SmoothnessClass::piecewise);
  CHECK(sigmoid_by_name("bspline2").smoothness == SmoothnessClass::c1);
  CHECK(sigmoid_by_name("tanh").smoothness == SmoothnessClass::c2);
}

TEST_SUITE_END();
