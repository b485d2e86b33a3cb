#include "expnn/registry.hpp"

#include <cmath>
#include <map>
#include <stdexcept>

namespace expnn {

namespace {

const double kE = std::exp(1.0);
const double kE2 = std::exp(2.0);

// Catalogue spanning the classes the convergence theory distinguishes:
// constant, smooth, Holder-only (cusp), and bounded-discontinuous targets.
const std::map<std::string, RegistryEntry, std::less<>>& table() {
  static const std::map<std::string, RegistryEntry, std::less<>> entries = [] {
    std::map<std::string, RegistryEntry, std::less<>> m;

    m["const5"] = RegistryEntry{
        {"const5", [](double) { return 5.0; }, {1.0, kE2},
         {true, true, true, LogHolder{1.0, 1.0}}},
        [](double) { return 0.0; },
        [](double) { return 0.0; },
        LogHolder{1.0, 1.0},
        "constant target; every operator reproduces it exactly"};

    m["logx"] = RegistryEntry{
        {"logx", [](double x) { return std::log(x); }, {1.0, kE2},
         {true, true, true, LogHolder{1.0, 1.0}}},
        [](double) { return 1.0; },
        [](double) { return 0.0; },
        LogHolder{1.0, 1.0},
        "linear in log coordinates; theta^2 f vanishes"};

    m["sq_log"] = RegistryEntry{
        {"sq_log",
         [](double x) {
           const double t = std::log(x);
           return t * t;
         },
         {1.0, kE},
         {true, true, true, LogHolder{2.0, 1.0}}},
        [](double x) { return 2.0 * std::log(x); },
        [](double) { return 2.0; },
        LogHolder{2.0, 1.0},
        "quadratic in log coordinates; constant theta^2 f"};

    m["sinlog"] = RegistryEntry{
        {"sinlog", [](double x) { return std::sin(std::log(x)) + 2.0; },
         {1.0, kE2},
         {true, true, true, LogHolder{1.0, 1.0}}},
        [](double x) { return std::cos(std::log(x)); },
        [](double x) { return -std::sin(std::log(x)); },
        LogHolder{1.0, 1.0},
        "smooth oscillatory target, bounded away from zero"};

    m["runge_log"] = RegistryEntry{
        {"runge_log",
         [](double x) {
           const double t = std::log(x);
           return 1.0 / (1.0 + t * t);
         },
         {std::exp(-2.0), kE2},
         {true, true, true, LogHolder{0.65, 1.0}}},
        [](double x) {
          const double t = std::log(x);
          const double d = 1.0 + t * t;
          return -2.0 * t / (d * d);
        },
        [](double x) {
          const double t = std::log(x);
          const double d = 1.0 + t * t;
          return (6.0 * t * t - 2.0) / (d * d * d);
        },
        LogHolder{0.65, 1.0},  // sup |theta f| = 9/(8 sqrt 3) ~ 0.6495
        "log-domain Runge bump; default quasi-interpolation target"};

    m["sqrtlog_holder"] = RegistryEntry{
        {"sqrtlog_holder",
         [](double x) { return std::sqrt(std::abs(std::log(x))); },
         {std::exp(-1.0), kE},
         {true, true, false, LogHolder{1.0, 0.5}}},
        nullptr,  // theta f unbounded at the interior cusp x = 1
        nullptr,
        LogHolder{1.0, 0.5},
        "Holder-1/2 cusp at x = 1; rate-test target for the O(n^{-lambda}) "
        "estimate"};

    m["step_log"] = RegistryEntry{
        {"step_log", [](double x) { return x >= kE ? 1.0 : 0.0; }, {1.0, kE2},
         {true, false, false, std::nullopt}},
        nullptr,
        nullptr,
        std::nullopt,
        "indicator of x >= e; bounded but discontinuous at x = e, so "
        "pointwise convergence is only tested away from the jump"};

    return m;
  }();
  return entries;
}

}  // namespace

const RegistryEntry& registry_get(std::string_view name) {
  const auto it = table().find(name);
  if (it == table().end()) {
    throw std::out_of_range("unknown function '" + std::string(name) +
                            "'; see registry_list()");
  }
  return it->second;
}

std::vector<std::string> registry_list() {
  std::vector<std::string> names;
  names.reserve(table().size());
  for (const auto& [name, entry] : table()) names.push_back(name);
  return names;  // std::map iteration order is already alphabetical
}

}  // namespace expnn
