#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "expnn/analysis.hpp"
#include "expnn/common.hpp"
#include "expnn/sigmoids.hpp"

namespace expnn {

// Process exit codes of the experiment runner.
inline constexpr int kExitOk = 0;
inline constexpr int kExitUnsatisfied = 1;   // run fine, some bound violated
inline constexpr int kExitBadConfig = 2;     // invalid config value or name
inline constexpr int kExitScaleTooSmall = 3; // empty lattice range
inline constexpr int kExitOutput = 4;        // output dir/file not writable

// Output-side failures (distinct from config validation so the CLI can map
// them to their own exit code).
struct OutputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Flat experiment description. `interval` overrides the registry function's
// default domain for E_n sweeps and the measurement window for Q_n / S_w;
// when unset the registry default (or the [1/2, 2] window) applies.
struct ExperimentConfig {
  std::string kernel_name = "tanh";
  std::string operator_family = "E_n";  // E_n | Q_n | E_n_multivariate | S_w
  std::string function_name = "sinlog";
  std::optional<Interval> interval;
  std::vector<double> scales = {10, 30, 100, 300, 1000};
  double nu = 0.5;
  int grid_points = 501;
  int truncation_window = 50;
  int dimension = 2;
  std::string output_dir = ".";
  std::uint64_t seed = 12345;
};

// Parses a flat key=value config file ('#' comments, blank lines allowed).
// Keys: kernel, operator, function, interval, scales, nu, grid_points,
// truncation, dimension, out, seed. Unknown keys are rejected.
ExperimentConfig load_config_file(const std::string& path);
void apply_override(ExperimentConfig& cfg, const std::string& key,
                    const std::string& value);

// One sweep row; bound columns are NaN when the theorem does not apply to
// the (operator, kernel, function) combination.
struct ScaleRow {
  double scale = 0.0;
  double sup_error = 0.0;
  double mean_error = 0.0;
  double bound_t3 = 0.0;
  double bound_t4 = 0.0;
  double bound_t6 = 0.0;
  bool satisfied = true;  // all applicable bounds; vacuously true if none
};

struct SweepResult {
  ExperimentConfig config;
  std::vector<ScaleRow> per_scale;
  std::vector<BoundReport> reports;  // every bound computed, incl. theorem 2
  std::optional<RateFit> rate;       // absent when a fit is not possible
  ConditionReport condition_report;
  double partition_deviation = 0.0;  // max |sum - 1| over seeded random u
  bool all_satisfied = true;
};

// Runs the sweep described by cfg and writes results.csv, bounds.csv,
// plot.gp and summary.txt into cfg.output_dir. Deterministic for a fixed
// config (seed included), independent of EXPNN_THREADS.
SweepResult run_experiment(const ExperimentConfig& cfg);

// results.csv writer: header
//   n,sup_error,mean_error,bound_t3,bound_t4,bound_t6,satisfied
// one row per scale, floats at 17 significant digits, `nan` sentinel for
// non-applicable bounds, LF line endings.
void emit_csv(const SweepResult& result, const std::string& path);

// bounds.csv writer: theorem,n,nu,bound,measured_sup_error,satisfied.
void emit_bounds_csv(const SweepResult& result, const std::string& path);

// Gnuplot script referencing results.csv columns by number.
void emit_plot_script(const SweepResult& result, const std::string& path);

// Human-readable run recap (deterministic text).
void emit_summary(const SweepResult& result, const std::string& path);

// 17-significant-digit float rendering shared by the CSV writers; NaN is
// spelled `nan`.
std::string format_value(double v);

}  // namespace expnn
