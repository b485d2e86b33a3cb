// Experiment runner: sweeps an approximation operator over a scale ladder,
// writes CSV/plot/summary files and reports bound satisfaction through the
// exit code (0 ok, 1 bound violated, 2 bad config, 3 scale too small,
// 4 output not writable).

#include <cstdio>
#include <exception>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"
#include "expnn/experiment.hpp"
#include "expnn/registry.hpp"

namespace {

void print_listing() {
  std::printf("kernels:\n");
  for (const auto& name : expnn::sigmoid_names()) {
    std::printf("  %s\n", name.c_str());
  }
  std::printf("functions:\n");
  for (const auto& name : expnn::registry_list()) {
    const auto& entry = expnn::registry_get(name);
    std::printf("  %-16s %s\n", name.c_str(), entry.notes.c_str());
  }
  std::printf("operators:\n  E_n\n  Q_n\n  E_n_multivariate\n  S_w\n");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Neural-network approximation operators on exponential sampling "
      "lattices: error sweeps against the quantitative convergence bounds"};

  std::string config_path;
  bool list = false;
  // Flag values funnel through the same key=value override path as the
  // config file, so parsing and validation live in one place.
  std::vector<std::pair<std::string, std::string>> overrides;
  const auto defer = [&overrides](const char* key) {
    return [&overrides, key](const std::string& value) {
      overrides.emplace_back(key, value);
    };
  };

  app.add_option("--config", config_path, "key=value config file");
  app.add_option_function<std::string>("--kernel", defer("kernel"),
                                       "sigmoid kernel name");
  app.add_option_function<std::string>(
      "--operator", defer("operator"),
      "operator family: E_n, Q_n, E_n_multivariate, S_w");
  app.add_option_function<std::string>("--function", defer("function"),
                                       "registry function name");
  app.add_option_function<std::string>(
      "--interval", defer("interval"),
      "a,b — domain for E_n/multivariate, window for Q_n/S_w");
  app.add_option_function<std::string>("--scales", defer("scales"),
                                       "comma-separated scale ladder");
  app.add_option_function<std::string>("--nu", defer("nu"),
                                       "rate parameter in (0,1)");
  app.add_option_function<std::string>("--grid-points", defer("grid_points"),
                                       "evaluation grid size (default 501)");
  app.add_option_function<std::string>("--truncation", defer("truncation"),
                                       "Q_n/S_w window half-width K");
  app.add_option_function<std::string>("--dimension", defer("dimension"),
                                       "multivariate dimension N");
  app.add_option_function<std::string>("--out", defer("out"),
                                       "output directory");
  app.add_option_function<std::string>("--seed", defer("seed"),
                                       "seed for the randomized checks");
  app.add_flag("--list", list, "print known kernels/functions and exit");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? expnn::kExitOk : expnn::kExitBadConfig;
  }

  if (list) {
    print_listing();
    return expnn::kExitOk;
  }

  try {
    expnn::ExperimentConfig cfg;
    if (!config_path.empty()) cfg = expnn::load_config_file(config_path);
    for (const auto& [key, value] : overrides) {
      expnn::apply_override(cfg, key, value);
    }

    const expnn::SweepResult result = expnn::run_experiment(cfg);

    std::printf("wrote results.csv, bounds.csv, plot.gp, summary.txt to %s\n",
                cfg.output_dir.c_str());
    size_t violated = 0;
    for (const auto& report : result.reports) {
      if (!report.satisfied) ++violated;
    }
    std::printf("bound checks: %zu computed, %zu violated\n",
                result.reports.size(), violated);
    if (result.rate) {
      std::printf("rate fit: slope=%.6g (r^2=%.6g)\n", result.rate->slope,
                  result.rate->r_squared);
    }
    return result.all_satisfied ? expnn::kExitOk : expnn::kExitUnsatisfied;
  } catch (const expnn::OutputError& e) {
    std::fprintf(stderr, "output error: %s\n", e.what());
    return expnn::kExitOutput;
  } catch (const expnn::ScaleTooSmallError& e) {
    std::fprintf(stderr, "scale error: %s\n", e.what());
    return expnn::kExitScaleTooSmall;
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return expnn::kExitBadConfig;
  } catch (const std::out_of_range& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return expnn::kExitBadConfig;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 5;
  }
}
