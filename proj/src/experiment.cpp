#include "expnn/experiment.hpp"

#include <atomic>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <limits>
#include <random>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "expnn/registry.hpp"

namespace expnn {

namespace {

const double kNaN = std::numeric_limits<double>::quiet_NaN();

// ---- parallel sweep helper ------------------------------------------------

int thread_budget() {
  long v = 0;  // 0 = auto
  if (const char* env = std::getenv("EXPNN_THREADS"); env && *env) {
    char* end = nullptr;
    const long parsed = std::strtol(env, &end, 10);
    if (end && *end == '\0' && parsed >= 0) v = parsed;
  }
  if (v <= 0) {
    const unsigned hc = std::thread::hardware_concurrency();
    return hc == 0 ? 4 : static_cast<int>(std::min(hc, 16u));
  }
  return static_cast<int>(std::min(v, 64L));
}

// Runs body(0..count-1) on a small pool. Each index writes only its own
// output slot, so results do not depend on the schedule.
void parallel_for(size_t count, const std::function<void(size_t)>& body) {
  const int workers =
      std::min<long>(thread_budget(), static_cast<long>(count));
  if (workers <= 1) {
    for (size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<size_t> next{0};
  std::vector<std::thread> pool;
  pool.reserve(static_cast<size_t>(workers));
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      while (true) {
        const size_t i = next.fetch_add(1);
        if (i >= count) break;
        body(i);
      }
    });
  }
  for (auto& t : pool) t.join();
}

// ---- config parsing ---------------------------------------------------------

std::string trim(const std::string& s) {
  size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

double parse_double(const std::string& value, const std::string& key) {
  const std::string v = trim(value);
  char* end = nullptr;
  const double parsed = std::strtod(v.c_str(), &end);
  if (v.empty() || end != v.c_str() + v.size() || !std::isfinite(parsed)) {
    throw std::invalid_argument("config: bad numeric value '" + value +
                                "' for key '" + key + "'");
  }
  return parsed;
}

long parse_long(const std::string& value, const std::string& key) {
  const double parsed = parse_double(value, key);
  if (parsed != std::floor(parsed)) {
    throw std::invalid_argument("config: key '" + key +
                                "' needs an integer, got '" + value + "'");
  }
  return static_cast<long>(parsed);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> parts;
  std::string part;
  std::istringstream in(s);
  while (std::getline(in, part, sep)) parts.push_back(part);
  return parts;
}

enum class Family { en, qn, multi, sw };

Family parse_family(const std::string& token) {
  if (token == "E_n") return Family::en;
  if (token == "Q_n") return Family::qn;
  if (token == "E_n_multivariate") return Family::multi;
  if (token == "S_w") return Family::sw;
  throw std::invalid_argument(
      "config: unknown operator '" + token +
      "'; expected E_n, Q_n, E_n_multivariate or S_w");
}

void validate_config(const ExperimentConfig& cfg) {
  const Family fam = parse_family(cfg.operator_family);
  if (cfg.scales.empty()) {
    throw std::invalid_argument("config: scales must be non-empty");
  }
  for (size_t i = 0; i < cfg.scales.size(); ++i) {
    const double s = cfg.scales[i];
    if (!(s > 0.0) || !std::isfinite(s)) {
      throw std::invalid_argument("config: scales must be positive");
    }
    if (i > 0 && !(s > cfg.scales[i - 1])) {
      throw std::invalid_argument("config: scales must be strictly increasing");
    }
    if (fam != Family::sw && (s != std::floor(s) || s < 1.0)) {
      throw std::invalid_argument(
          "config: integer scales >= 1 required for operator " +
          cfg.operator_family);
    }
  }
  if (!(cfg.nu > 0.0 && cfg.nu < 1.0)) {
    throw std::invalid_argument("config: nu must lie in (0, 1)");
  }
  if (cfg.grid_points < 2) {
    throw std::invalid_argument("config: grid_points must be >= 2");
  }
  if (cfg.truncation_window < 1) {
    throw std::invalid_argument("config: truncation must be >= 1");
  }
  if (cfg.dimension < 1 || cfg.dimension > 4) {
    throw std::invalid_argument("config: dimension must be in 1..4");
  }
  if (cfg.interval && !cfg.interval->valid()) {
    throw std::invalid_argument("config: interval must satisfy 0 < a < b");
  }
}

// ---- measurement helpers for the families without one in analysis ----------

ErrorStats measure_sw_error(const DensityKernel& kernel,
                            const FunctionHandle& f, double w, Interval window,
                            int grid_points, int truncation) {
  OperatorConfig cfg{OperatorFamily::sw, kernel, w, truncation, 1};
  const std::vector<double> xs = log_grid(window, grid_points);
  ErrorStats stats;
  double acc = 0.0;
  for (double x : xs) {
    const double err = std::abs(classical_eval(cfg, f, x).value - f.eval(x));
    stats.sup = std::max(stats.sup, err);
    acc += err;
  }
  stats.mean = acc / static_cast<double>(xs.size());
  return stats;
}

ErrorStats measure_multi_error(const DensityKernel& kernel,
                               const FunctionHandle& f, int n, int dim) {
  OperatorConfig cfg{OperatorFamily::en_multivariate, kernel,
                     static_cast<double>(n), 50, dim};
  constexpr int kAxisGrid = 15;
  const std::vector<double> axis = log_grid(f.domain, kAxisGrid);
  std::vector<int> idx(static_cast<size_t>(dim), 0);
  std::vector<double> point(static_cast<size_t>(dim));
  ErrorStats stats;
  double acc = 0.0;
  size_t visited = 0;
  while (true) {
    double target = 1.0;
    for (int a = 0; a < dim; ++a) {
      point[static_cast<size_t>(a)] = axis[static_cast<size_t>(idx[static_cast<size_t>(a)])];
      target *= f.eval(point[static_cast<size_t>(a)]);
    }
    const double err = std::abs(nn_eval_multi(cfg, f, point) - target);
    stats.sup = std::max(stats.sup, err);
    acc += err;
    ++visited;
    int a = 0;
    while (a < dim && ++idx[static_cast<size_t>(a)] == kAxisGrid) {
      idx[static_cast<size_t>(a)] = 0;
      ++a;
    }
    if (a == dim) break;
  }
  stats.mean = acc / static_cast<double>(visited);
  return stats;
}

double seeded_partition_deviation(const DensityKernel& kernel,
                                  std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> dist(std::log(0.1), std::log(10.0));
  double dev = 0.0;
  for (int i = 0; i < 100; ++i) {
    const double u = std::exp(dist(rng));
    dev = std::max(dev, std::abs(partition_sum(kernel, u, 50) - 1.0));
  }
  return dev;
}

const char* theorem_name(TheoremTag tag) {
  switch (tag) {
    case TheoremTag::t2: return "t2";
    case TheoremTag::t3: return "t3";
    case TheoremTag::t4: return "t4";
    default: return "t6";
  }
}

const char* outcome_name(CheckOutcome outcome) {
  switch (outcome) {
    case CheckOutcome::pass: return "pass";
    case CheckOutcome::fail: return "fail";
    default: return "not_applicable";
  }
}

void write_file(const std::string& path, const std::string& body) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw OutputError("cannot open '" + path + "' for writing");
  out << body;
  out.flush();
  if (!out) throw OutputError("failed writing '" + path + "'");
}

}  // namespace

std::string format_value(double v) {
  if (std::isnan(v)) return "nan";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void apply_override(ExperimentConfig& cfg, const std::string& raw_key,
                    const std::string& raw_value) {
  const std::string key = trim(raw_key);
  const std::string value = trim(raw_value);
  if (key == "kernel") {
    cfg.kernel_name = value;
  } else if (key == "operator") {
    cfg.operator_family = value;
  } else if (key == "function") {
    cfg.function_name = value;
  } else if (key == "interval") {
    const auto parts = split(value, ',');
    if (parts.size() != 2) {
      throw std::invalid_argument("config: interval needs the form a,b");
    }
    cfg.interval = Interval{parse_double(parts[0], "interval"),
                            parse_double(parts[1], "interval")};
  } else if (key == "scales") {
    std::vector<double> scales;
    for (const auto& part : split(value, ',')) {
      scales.push_back(parse_double(part, "scales"));
    }
    if (scales.empty()) {
      throw std::invalid_argument("config: scales list is empty");
    }
    cfg.scales = std::move(scales);
  } else if (key == "nu") {
    cfg.nu = parse_double(value, key);
  } else if (key == "grid_points") {
    cfg.grid_points = static_cast<int>(parse_long(value, key));
  } else if (key == "truncation") {
    cfg.truncation_window = static_cast<int>(parse_long(value, key));
  } else if (key == "dimension") {
    cfg.dimension = static_cast<int>(parse_long(value, key));
  } else if (key == "out") {
    cfg.output_dir = value;
  } else if (key == "seed") {
    const long parsed = parse_long(value, key);
    if (parsed < 0) throw std::invalid_argument("config: seed must be >= 0");
    cfg.seed = static_cast<std::uint64_t>(parsed);
  } else {
    throw std::invalid_argument("config: unknown key '" + key + "'");
  }
}

ExperimentConfig load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw std::invalid_argument("config: cannot read '" + path + "'");
  }
  ExperimentConfig cfg;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string stripped = trim(line);
    if (stripped.empty() || stripped[0] == '#') continue;
    const size_t eq = stripped.find('=');
    if (eq == std::string::npos) {
      throw std::invalid_argument("config: line " + std::to_string(line_no) +
                                  " of '" + path + "' is not key=value");
    }
    apply_override(cfg, stripped.substr(0, eq), stripped.substr(eq + 1));
  }
  return cfg;
}

SweepResult run_experiment(const ExperimentConfig& cfg) {
  validate_config(cfg);
  const Family fam = parse_family(cfg.operator_family);
  const DensityKernel kernel = kernel_by_name(cfg.kernel_name);
  const RegistryEntry& entry = registry_get(cfg.function_name);

  SweepResult result;
  result.config = cfg;
  result.condition_report = check_conditions(kernel.sigmoid(), 10.0, 1000);
  result.partition_deviation = seeded_partition_deviation(kernel, cfg.seed);

  FunctionHandle f = entry.handle;
  Interval window{0.5, 2.0};
  if (cfg.interval) {
    if (fam == Family::en || fam == Family::multi) {
      f.domain = *cfg.interval;
    } else {
      window = *cfg.interval;
    }
  }
  const bool tanh_kernel = kernel.has_closed_form();

  const size_t count = cfg.scales.size();
  result.per_scale.assign(count, ScaleRow{});
  std::vector<std::vector<BoundReport>> scale_reports(count);
  std::vector<std::exception_ptr> failures(count);

  parallel_for(count, [&](size_t i) {
    try {
      const double scale = cfg.scales[i];
      ScaleRow row;
      row.scale = scale;
      row.bound_t3 = kNaN;
      row.bound_t4 = kNaN;
      row.bound_t6 = kNaN;
      auto& reports = scale_reports[i];

      switch (fam) {
        case Family::en: {
          const int n = static_cast<int>(scale);
          const ErrorStats stats =
              measure_en_error(kernel, f, n, cfg.grid_points);
          row.sup_error = stats.sup;
          row.mean_error = stats.mean;
          if (tanh_kernel && f.tags.continuous) {
            reports.push_back(bound_theorem3(f, kernel, n, cfg.nu, stats.sup));
            row.bound_t3 = reports.back().bound;
          }
          if (tanh_kernel && f.tags.c2) {
            reports.push_back(bound_theorem4(f, kernel, n, cfg.nu, stats.sup));
            row.bound_t4 = reports.back().bound;
          }
          if (f.tags.log_holder) {
            reports.push_back(bound_theorem2(f, kernel, n, stats.sup));
          }
          break;
        }
        case Family::qn: {
          const int n = static_cast<int>(scale);
          const ErrorStats stats =
              measure_qn_error(kernel, f, n, window, cfg.grid_points,
                               cfg.truncation_window);
          row.sup_error = stats.sup;
          row.mean_error = stats.mean;
          if (tanh_kernel && f.tags.continuous && f.tags.bounded) {
            reports.push_back(bound_theorem6(f, kernel, n, cfg.nu, window,
                                             stats.sup,
                                             cfg.truncation_window));
            row.bound_t6 = reports.back().bound;
          }
          break;
        }
        case Family::sw: {
          const ErrorStats stats =
              measure_sw_error(kernel, f, scale, window, cfg.grid_points,
                               cfg.truncation_window);
          row.sup_error = stats.sup;
          row.mean_error = stats.mean;
          break;
        }
        case Family::multi: {
          const ErrorStats stats = measure_multi_error(
              kernel, f, static_cast<int>(scale), cfg.dimension);
          row.sup_error = stats.sup;
          row.mean_error = stats.mean;
          break;
        }
      }
      for (const auto& report : reports) {
        row.satisfied = row.satisfied && report.satisfied;
      }
      result.per_scale[i] = row;
    } catch (...) {
      failures[i] = std::current_exception();
    }
  });
  for (const auto& failure : failures) {
    if (failure) std::rethrow_exception(failure);
  }

  for (auto& reports : scale_reports) {
    for (auto& report : reports) {
      result.all_satisfied = result.all_satisfied && report.satisfied;
      result.reports.push_back(report);
    }
  }

  std::vector<std::pair<double, double>> pairs;
  pairs.reserve(count);
  for (const auto& row : result.per_scale) {
    pairs.emplace_back(row.scale, row.sup_error);
  }
  try {
    result.rate = fit_rate(pairs);
  } catch (const std::invalid_argument&) {
    result.rate.reset();
  }

  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(cfg.output_dir, ec);
  if (ec) {
    throw OutputError("cannot create output dir '" + cfg.output_dir +
                      "': " + ec.message());
  }
  const fs::path dir(cfg.output_dir);
  emit_csv(result, (dir / "results.csv").string());
  emit_bounds_csv(result, (dir / "bounds.csv").string());
  emit_plot_script(result, (dir / "plot.gp").string());
  emit_summary(result, (dir / "summary.txt").string());
  return result;
}

void emit_csv(const SweepResult& result, const std::string& path) {
  std::string body = "n,sup_error,mean_error,bound_t3,bound_t4,bound_t6,satisfied\n";
  for (const auto& row : result.per_scale) {
    body += format_value(row.scale);
    body += ',';
    body += format_value(row.sup_error);
    body += ',';
    body += format_value(row.mean_error);
    body += ',';
    body += format_value(row.bound_t3);
    body += ',';
    body += format_value(row.bound_t4);
    body += ',';
    body += format_value(row.bound_t6);
    body += ',';
    body += row.satisfied ? "true" : "false";
    body += '\n';
  }
  write_file(path, body);
}

void emit_bounds_csv(const SweepResult& result, const std::string& path) {
  std::string body = "theorem,n,nu,bound,measured_sup_error,satisfied\n";
  for (const auto& report : result.reports) {
    body += theorem_name(report.theorem);
    body += ',';
    body += format_value(static_cast<double>(report.n));
    body += ',';
    body += format_value(report.nu);
    body += ',';
    body += format_value(report.bound);
    body += ',';
    body += format_value(report.measured_sup_error);
    body += ',';
    body += report.satisfied ? "true" : "false";
    body += '\n';
  }
  write_file(path, body);
}

void emit_plot_script(const SweepResult& result, const std::string& path) {
  std::string body;
  body += "# generated by the expnn experiment runner\n";
  body += "# data columns: 1=n 2=sup_error 3=mean_error 4=bound_t3 "
          "5=bound_t4 6=bound_t6\n";
  body += "set datafile separator \",\"\n";
  body += "set datafile missing \"nan\"\n";
  body += "set logscale xy\n";
  body += "set xlabel \"scale n\"\n";
  body += "set ylabel \"sup error / bound\"\n";
  body += "set grid\n";
  body += "set key left bottom\n";
  body += "set title \"" + result.config.operator_family + " / " +
          result.config.kernel_name + " / " + result.config.function_name +
          "\"\n";
  body += "plot \"results.csv\" using 1:2 skip 1 with linespoints lw 2 "
          "title \"sup error\", \\\n";
  body += "     \"results.csv\" using 1:3 skip 1 with linespoints "
          "title \"mean error\", \\\n";
  body += "     \"results.csv\" using 1:4 skip 1 with lines "
          "title \"bound t3\", \\\n";
  body += "     \"results.csv\" using 1:5 skip 1 with lines "
          "title \"bound t4\", \\\n";
  body += "     \"results.csv\" using 1:6 skip 1 with lines "
          "title \"bound t6\"\n";
  write_file(path, body);
}

void emit_summary(const SweepResult& result, const std::string& path) {
  char buf[160];
  std::string body;
  const auto& cfg = result.config;
  body += "experiment: kernel=" + cfg.kernel_name +
          " operator=" + cfg.operator_family +
          " function=" + cfg.function_name + "\n";
  if (cfg.interval) {
    std::snprintf(buf, sizeof buf, "interval: [%.6g, %.6g]\n",
                  cfg.interval->lo, cfg.interval->hi);
    body += buf;
  } else {
    body += "interval: registry default\n";
  }
  std::snprintf(buf, sizeof buf,
                "nu=%.6g grid_points=%d truncation=%d dimension=%d seed=%llu\n",
                cfg.nu, cfg.grid_points, cfg.truncation_window, cfg.dimension,
                static_cast<unsigned long long>(cfg.seed));
  body += buf;

  const auto& rep = result.condition_report;
  std::snprintf(buf, sizeof buf,
                "sigmoid conditions: concavity=%s decay=%s (slope=%.4g) "
                "odd_symmetry=%s (deviation=%.3g)\n",
                outcome_name(rep.concavity), outcome_name(rep.decay),
                rep.decay_slope, outcome_name(rep.odd_symmetry),
                rep.odd_symmetry_deviation);
  body += buf;
  std::snprintf(buf, sizeof buf,
                "partition of unity: max |sum - 1| = %.3g over 100 random u\n",
                result.partition_deviation);
  body += buf;

  body += "\n   scale      sup_error     mean_error  satisfied\n";
  for (const auto& row : result.per_scale) {
    std::snprintf(buf, sizeof buf, "%8g  %13.6g  %13.6g  %s\n", row.scale,
                  row.sup_error, row.mean_error,
                  row.satisfied ? "yes" : "NO");
    body += buf;
  }

  size_t violated = 0;
  for (const auto& report : result.reports) {
    if (!report.satisfied) ++violated;
  }
  std::snprintf(buf, sizeof buf, "\nbound checks: %zu computed, %zu violated\n",
                result.reports.size(), violated);
  body += buf;

  if (result.rate) {
    std::snprintf(buf, sizeof buf,
                  "rate fit: slope=%.6g intercept=%.6g r_squared=%.6g\n",
                  result.rate->slope, result.rate->intercept,
                  result.rate->r_squared);
    body += buf;
  } else {
    body += "rate fit: unavailable (needs >= 4 positive errors spanning a "
            "decade of scales)\n";
  }
  body += result.all_satisfied ? "overall: all bound checks satisfied\n"
                               : "overall: BOUND VIOLATION\n";
  write_file(path, body);
}

}  // namespace expnn
