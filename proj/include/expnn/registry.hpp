#pragma once

#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "expnn/operators.hpp"

namespace expnn {

// Canned target function with optional closed-form Mellin derivatives
// theta f = x f'(x) and theta^2 f (as functions of x), used to cross-check
// the finite-difference path.
struct RegistryEntry {
  FunctionHandle handle;
  std::function<double(double)> analytic_theta1;  // empty when unknown
  std::function<double(double)> analytic_theta2;
  std::optional<LogHolder> known_holder;
  std::string notes;
};

// Lookup by the exact name accepted by the CLI --function flag.
// Unknown names throw std::out_of_range.
const RegistryEntry& registry_get(std::string_view name);

// All registered names, alphabetical, stable across calls.
std::vector<std::string> registry_list();

}  // namespace expnn
