#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "doctest.h"
#include "expnn/experiment.hpp"

using namespace expnn;
namespace fs = std::filesystem;

namespace {

fs::path fresh_dir(const std::string& leaf) {
  const fs::path dir = fs::temp_directory_path() / "expnn_tests" / leaf;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

size_t count_lines(const std::string& text) {
  size_t lines = 0;
  for (char c : text) {
    if (c == '\n') ++lines;
  }
  return lines;
}

}  // namespace

TEST_SUITE_BEGIN("experiment");

TEST_CASE("overrides cover every key") {
  ExperimentConfig cfg;
  apply_override(cfg, "kernel", "logistic");
  apply_override(cfg, "operator", "Q_n");
  apply_override(cfg, "function", "runge_log");
  apply_override(cfg, "interval", " 0.8 , 2.5 ");
  apply_override(cfg, "scales", "5,15,50");
  apply_override(cfg, "nu", "0.25");
  apply_override(cfg, "grid_points", "101");
  apply_override(cfg, "truncation", "40");
  apply_override(cfg, "dimension", "3");
  apply_override(cfg, "out", "/tmp/somewhere");
  apply_override(cfg, "seed", "990");

  CHECK(cfg.kernel_name == "logistic");
  CHECK(cfg.operator_family == "Q_n");
  CHECK(cfg.function_name == "runge_log");
  REQUIRE(cfg.interval.has_value());
  CHECK(cfg.interval->lo == 0.8);
  CHECK(cfg.interval->hi == 2.5);
  CHECK(cfg.scales == std::vector<double>{5, 15, 50});
  CHECK(cfg.nu == 0.25);
  CHECK(cfg.grid_points == 101);
  CHECK(cfg.truncation_window == 40);
  CHECK(cfg.dimension == 3);
  CHECK(cfg.output_dir == "/tmp/somewhere");
  CHECK(cfg.seed == 990);
}

TEST_CASE("override rejects unknown keys and malformed values") {
  ExperimentConfig cfg;
  CHECK_THROWS_AS(apply_override(cfg, "kernle", "tanh"), std::invalid_argument);
  CHECK_THROWS_AS(apply_override(cfg, "nu", "abc"), std::invalid_argument);
  CHECK_THROWS_AS(apply_override(cfg, "nu", "0.5x"), std::invalid_argument);
  CHECK_THROWS_AS(apply_override(cfg, "nu", ""), std::invalid_argument);
  CHECK_THROWS_AS(apply_override(cfg, "grid_points", "10.5"),
                  std::invalid_argument);
  CHECK_THROWS_AS(apply_override(cfg, "interval", "1.0"),
                  std::invalid_argument);
  CHECK_THROWS_AS(apply_override(cfg, "interval", "1,2,3"),
                  std::invalid_argument);
  CHECK_THROWS_AS(apply_override(cfg, "seed", "-4"), std::invalid_argument);
  CHECK_THROWS_AS(apply_override(cfg, "scales", "inf"), std::invalid_argument);
}

TEST_CASE("config files parse with comments and whitespace") {
  const fs::path dir = fresh_dir("config_parse");
  const fs::path file = dir / "run.cfg";
  {
    std::ofstream out(file);
    out << "# experiment description\n"
        << "\n"
        << "kernel = tanh\n"
        << "operator= E_n\n"
        << "function =sq_log\n"
        << "scales = 10, 30, 100\n"
        << "  nu = 0.4  \n"
        << "seed=7\n";
  }
  const ExperimentConfig cfg = load_config_file(file.string());
  CHECK(cfg.kernel_name == "tanh");
  CHECK(cfg.operator_family == "E_n");
  CHECK(cfg.function_name == "sq_log");
  CHECK(cfg.scales == std::vector<double>{10, 30, 100});
  CHECK(cfg.nu == 0.4);
  CHECK(cfg.seed == 7);
  // Untouched keys keep their defaults.
  CHECK(cfg.grid_points == 501);
  CHECK_FALSE(cfg.interval.has_value());

  CHECK_THROWS_AS(load_config_file((dir / "missing.cfg").string()),
                  std::invalid_argument);
  const fs::path bad = dir / "bad.cfg";
  {
    std::ofstream out(bad);
    out << "kernel = tanh\n"
        << "this line has no equals sign\n";
  }
  CHECK_THROWS_AS(load_config_file(bad.string()), std::invalid_argument);
}

TEST_CASE("float formatting round-trips at full precision") {
  CHECK(format_value(std::numeric_limits<double>::quiet_NaN()) == "nan");
  CHECK(format_value(10.0) == "10");
  CHECK(format_value(0.1) == "0.10000000000000001");
  CHECK(format_value(1.0 / 3.0) == "0.33333333333333331");
  CHECK(format_value(0.0) == "0");
  CHECK(std::stod(format_value(1.0 / 7.0)) == 1.0 / 7.0);
}

TEST_CASE("constant-target sweep satisfies every bound and writes all files") {
  const fs::path dir = fresh_dir("const_run");
  ExperimentConfig cfg;
  cfg.function_name = "const5";
  cfg.scales = {10, 100};
  cfg.output_dir = dir.string();
  const SweepResult result = run_experiment(cfg);

  CHECK(result.all_satisfied);
  CHECK(result.condition_report.overall);
  CHECK(result.partition_deviation < 1e-10);
  REQUIRE(result.per_scale.size() == 2);
  for (const auto& row : result.per_scale) {
    CHECK(row.sup_error < 1e-12);
    CHECK(row.mean_error <= row.sup_error);
    CHECK(row.satisfied);
    CHECK(std::isfinite(row.bound_t3));
    CHECK(std::isfinite(row.bound_t4));
    CHECK(std::isnan(row.bound_t6));
  }
  // const5 carries continuous, c2 and holder tags: three reports per scale.
  CHECK(result.reports.size() == 6);
  // Two scales cannot support a rate fit.
  CHECK_FALSE(result.rate.has_value());

  for (const char* name :
       {"results.csv", "bounds.csv", "plot.gp", "summary.txt"}) {
    CAPTURE(name);
    CHECK(fs::exists(dir / name));
  }

  const std::string csv = slurp(dir / "results.csv");
  CHECK(count_lines(csv) == 3);
  CHECK(csv.rfind("n,sup_error,mean_error,bound_t3,bound_t4,bound_t6,"
                  "satisfied\n", 0) == 0);
  CHECK(csv.find("true") != std::string::npos);
  CHECK(csv.find("\r") == std::string::npos);

  // Re-emitting from the in-memory result reproduces the bytes exactly.
  emit_csv(result, (dir / "again.csv").string());
  CHECK(slurp(dir / "again.csv") == csv);

  const std::string bounds = slurp(dir / "bounds.csv");
  CHECK(bounds.rfind("theorem,n,nu,bound,measured_sup_error,satisfied\n", 0) ==
        0);
  CHECK(count_lines(bounds) == 7);
  CHECK(bounds.find("t2,") != std::string::npos);
  CHECK(bounds.find("t3,") != std::string::npos);
  CHECK(bounds.find("t4,") != std::string::npos);

  const std::string summary = slurp(dir / "summary.txt");
  CHECK(summary.find("all bound checks satisfied") != std::string::npos);
  CHECK(summary.find("const5") != std::string::npos);

  const std::string plot = slurp(dir / "plot.gp");
  CHECK(plot.find("set logscale xy") != std::string::npos);
  CHECK(plot.find("results.csv") != std::string::npos);
  CHECK(plot.find("using 1:2") != std::string::npos);
}

TEST_CASE("sweeps are deterministic and thread-count independent") {
  ExperimentConfig cfg;
  cfg.function_name = "sinlog";
  cfg.scales = {10, 30, 100, 300};

  const fs::path dir_a = fresh_dir("det_a");
  const fs::path dir_b = fresh_dir("det_b");

  cfg.output_dir = dir_a.string();
  setenv("EXPNN_THREADS", "1", 1);
  run_experiment(cfg);

  cfg.output_dir = dir_b.string();
  setenv("EXPNN_THREADS", "4", 1);
  run_experiment(cfg);
  unsetenv("EXPNN_THREADS");

  for (const char* name :
       {"results.csv", "bounds.csv", "plot.gp", "summary.txt"}) {
    CAPTURE(name);
    CHECK(slurp(dir_a / name) == slurp(dir_b / name));
  }
  // The sinlog sweep has four scales spanning a decade: the rate appears.
  const std::string summary = slurp(dir_a / "summary.txt");
  CHECK(summary.find("rate fit: slope=") != std::string::npos);
}

TEST_CASE("quasi-interpolation sweep reports only its own bound") {
  const fs::path dir = fresh_dir("qn_run");
  ExperimentConfig cfg;
  cfg.operator_family = "Q_n";
  cfg.function_name = "runge_log";
  cfg.scales = {10, 100};
  cfg.output_dir = dir.string();
  const SweepResult result = run_experiment(cfg);
  CHECK(result.all_satisfied);
  REQUIRE(result.per_scale.size() == 2);
  for (const auto& row : result.per_scale) {
    CHECK(std::isnan(row.bound_t3));
    CHECK(std::isnan(row.bound_t4));
    CHECK(std::isfinite(row.bound_t6));
    CHECK(row.sup_error < row.bound_t6);
  }
  CHECK(result.reports.size() == 2);
  const std::string csv = slurp(dir / "results.csv");
  CHECK(csv.find("nan") != std::string::npos);
  CHECK(result.per_scale[1].sup_error < result.per_scale[0].sup_error);
}

TEST_CASE("classical sweep accepts real scales and skips bounds") {
  const fs::path dir = fresh_dir("sw_run");
  ExperimentConfig cfg;
  cfg.operator_family = "S_w";
  cfg.function_name = "sinlog";
  cfg.scales = {2.5, 10, 31.6, 100, 316};
  cfg.output_dir = dir.string();
  const SweepResult result = run_experiment(cfg);
  CHECK(result.all_satisfied);  // vacuous: no applicable bounds
  CHECK(result.reports.empty());
  REQUIRE(result.rate.has_value());
  CHECK(result.rate->slope < -0.5);
  for (const auto& row : result.per_scale) {
    CHECK(std::isnan(row.bound_t3));
    CHECK(std::isnan(row.bound_t6));
    CHECK(row.satisfied);
  }
}

TEST_CASE("multivariate sweep reproduces a constant product") {
  const fs::path dir = fresh_dir("multi_run");
  ExperimentConfig cfg;
  cfg.operator_family = "E_n_multivariate";
  cfg.function_name = "const5";
  cfg.dimension = 2;
  cfg.scales = {5, 10};
  cfg.output_dir = dir.string();
  const SweepResult result = run_experiment(cfg);
  CHECK(result.reports.empty());
  for (const auto& row : result.per_scale) {
    CHECK(row.sup_error < 1e-10);
  }
}

TEST_CASE("non-tanh kernels still get the kernel-agnostic bound") {
  const fs::path dir = fresh_dir("logistic_run");
  ExperimentConfig cfg;
  cfg.kernel_name = "logistic";
  cfg.function_name = "sinlog";
  cfg.scales = {10, 50};
  cfg.output_dir = dir.string();
  const SweepResult result = run_experiment(cfg);
  // Tanh-specific bounds are off; the Holder-tag bound still applies.
  REQUIRE(result.reports.size() == 2);
  for (const auto& report : result.reports) {
    CHECK(report.theorem == TheoremTag::t2);
    CHECK(report.satisfied);
  }
  for (const auto& row : result.per_scale) {
    CHECK(std::isnan(row.bound_t3));
    CHECK(std::isnan(row.bound_t4));
    CHECK(std::isnan(row.bound_t6));
  }
}

TEST_CASE("interval override rescopes the sweep") {
  const fs::path dir = fresh_dir("interval_run");
  ExperimentConfig cfg;
  cfg.function_name = "sinlog";
  cfg.interval = Interval{1.0, std::exp(1.0)};
  cfg.scales = {10, 100};
  cfg.output_dir = dir.string();
  const SweepResult result = run_experiment(cfg);
  CHECK(result.all_satisfied);

  ExperimentConfig qcfg;
  qcfg.operator_family = "Q_n";
  qcfg.function_name = "runge_log";
  qcfg.interval = Interval{0.8, 1.25};
  qcfg.scales = {10, 100};
  qcfg.output_dir = (dir / "qn").string();
  CHECK(run_experiment(qcfg).all_satisfied);
}

TEST_CASE("config validation failures") {
  const auto run_with = [](auto mutate) {
    ExperimentConfig cfg;
    cfg.scales = {10, 100};
    cfg.output_dir =
        (fs::temp_directory_path() / "expnn_tests" / "never_written").string();
    mutate(cfg);
    return run_experiment(cfg);
  };

  CHECK_THROWS_AS(run_with([](auto& c) { c.kernel_name = "nope"; }),
                  std::out_of_range);
  CHECK_THROWS_AS(run_with([](auto& c) { c.function_name = "nope"; }),
                  std::out_of_range);
  CHECK_THROWS_AS(run_with([](auto& c) { c.operator_family = "En"; }),
                  std::invalid_argument);
  CHECK_THROWS_AS(run_with([](auto& c) { c.scales = {}; }),
                  std::invalid_argument);
  CHECK_THROWS_AS(run_with([](auto& c) { c.scales = {10, 10}; }),
                  std::invalid_argument);
  CHECK_THROWS_AS(run_with([](auto& c) { c.scales = {100, 10}; }),
                  std::invalid_argument);
  CHECK_THROWS_AS(run_with([](auto& c) { c.scales = {2.5, 10}; }),
                  std::invalid_argument);
  CHECK_THROWS_AS(run_with([](auto& c) { c.scales = {-5, 10}; }),
                  std::invalid_argument);
  CHECK_THROWS_AS(run_with([](auto& c) { c.nu = 0.0; }),
                  std::invalid_argument);
  CHECK_THROWS_AS(run_with([](auto& c) { c.nu = 1.0; }),
                  std::invalid_argument);
  CHECK_THROWS_AS(run_with([](auto& c) { c.grid_points = 1; }),
                  std::invalid_argument);
  CHECK_THROWS_AS(run_with([](auto& c) { c.truncation_window = 0; }),
                  std::invalid_argument);
  CHECK_THROWS_AS(run_with([](auto& c) { c.dimension = 0; }),
                  std::invalid_argument);
  CHECK_THROWS_AS(run_with([](auto& c) { c.dimension = 5; }),
                  std::invalid_argument);
  CHECK_THROWS_AS(run_with([](auto& c) { c.interval = Interval{2.0, 1.0}; }),
                  std::invalid_argument);
}

TEST_CASE("empty lattice ranges surface with their own error type") {
  ExperimentConfig cfg;
  cfg.function_name = "sinlog";
  cfg.interval = Interval{2.0, 2.5};
  cfg.scales = {1, 2, 5, 10};
  cfg.output_dir =
      (fs::temp_directory_path() / "expnn_tests" / "never_written2").string();
  CHECK_THROWS_AS(run_experiment(cfg), ScaleTooSmallError);
}

TEST_CASE("unwritable output directories raise the output error") {
  const fs::path dir = fresh_dir("blocked");
  const fs::path file = dir / "occupied";
  {
    std::ofstream out(file);
    out << "x";
  }
  ExperimentConfig cfg;
  cfg.function_name = "const5";
  cfg.scales = {10, 100};
  cfg.output_dir = (file / "sub").string();  // path through a regular file
  CHECK_THROWS_AS(run_experiment(cfg), OutputError);
}

TEST_SUITE_END();
