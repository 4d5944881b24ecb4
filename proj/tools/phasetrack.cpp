// phasetrack command-line front end.
//
//   phasetrack dyne    --regime adaptive-squeezed --n 1000
//   phasetrack mzi     --mode nonadaptive --n 1:1000:4
//   phasetrack sweep   --regime heterodyne-coherent --out het.csv
//   phasetrack optimum --regime adaptive-coherent --n 10000
//   phasetrack theory  --regime adaptive-coherent --n 1:1e6:7
//
// Options may also come from a key = value file given with --config;
// command-line values win over the file.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "phasetrack/harness.hpp"
#include "phasetrack/params.hpp"
#include "phasetrack/theory.hpp"

namespace pt = phasetrack;

namespace {

enum ExitCode { kOk = 0, kValidation = 1, kIo = 2, kBudget = 3 };

struct Options {
  std::string regime;
  std::string mode;
  std::vector<std::string> n_specs;
  std::vector<double> x_values;
  std::vector<double> x_factors;
  std::vector<double> r_values;
  std::vector<double> epsilon_values;
  std::uint64_t trajectories = 0;
  std::uint64_t seed = 1;
  std::string out;
  std::string format = "csv";
  int jobs = 0;
  double budget_secs = 600.0;
  double burn_in = 0.0;
  double horizon = 0.0;
  bool serial = false;
  std::uint64_t search_trajectories = 32;
  std::size_t max_cycles = 3;
};

std::vector<double> n_grid(const Options& o, std::vector<double> fallback) {
  if (o.n_specs.empty()) return fallback;
  std::vector<double> grid;
  for (const auto& spec : o.n_specs) {
    for (double n : pt::parse_n_grid(spec)) grid.push_back(n);
  }
  return grid;
}

pt::Regime dyne_regime(const Options& o) {
  if (!o.regime.empty()) {
    const pt::Regime regime = pt::parse_regime(o.regime);
    if (!pt::is_dyne(regime)) throw pt::ValidationError("dyne: --regime must be a dyne regime");
    return regime;
  }
  const bool squeezed = !o.r_values.empty() && o.r_values.front() > 0.0;
  const bool heterodyne = o.mode == "heterodyne" || o.mode == "nonadaptive";
  if (heterodyne) return squeezed ? pt::Regime::heterodyne_squeezed : pt::Regime::heterodyne_coherent;
  return squeezed ? pt::Regime::adaptive_squeezed : pt::Regime::adaptive_coherent;
}

pt::Mode mzi_mode(const Options& o) {
  if (o.mode.empty()) return pt::Mode::adaptive;
  if (o.mode == "heterodyne") throw pt::ValidationError("mzi: --mode must be adaptive or nonadaptive");
  return pt::parse_mode(o.mode);
}

pt::EnsembleOptions execution(const Options& o) {
  if (o.jobs < 0) throw pt::ValidationError("--jobs must be >= 0");
  if (!(o.budget_secs > 0.0)) throw pt::ValidationError("--budget-secs must be positive");
  pt::EnsembleOptions e;
  e.execution = o.serial ? pt::Execution::serial : pt::Execution::parallel;
  e.jobs = o.jobs;
  e.budget_seconds = o.budget_secs;
  return e;
}

pt::SweepConfig sweep_config(const Options& o, pt::Regime regime, std::vector<double> default_n,
                             std::vector<double> default_factors) {
  pt::SweepConfig c;
  c.regime = regime;
  if (regime == pt::Regime::mzi) c.mzi_mode = mzi_mode(o);
  c.n_values = n_grid(o, std::move(default_n));
  c.x_values = o.x_values;
  c.x_factors = o.x_factors.empty() ? default_factors : o.x_factors;
  c.r_values = o.r_values;
  c.epsilon_values = o.epsilon_values;
  c.trajectories = o.trajectories;
  c.seed = o.seed;
  c.burn_in = o.burn_in;
  c.horizon = o.horizon;
  c.execution = execution(o);
  if (regime == pt::Regime::mzi && (!c.x_values.empty() || !c.r_values.empty())) {
    throw pt::ValidationError("mzi: --x and --r do not apply to the interferometer");
  }
  return c;
}

void write(const std::vector<pt::SweepRow>& rows, const Options& o) {
  const pt::OutputFormat format = pt::parse_format(o.format);
  if (o.out.empty()) {
    pt::write_results(rows, std::cout, format);
    std::cout.flush();
    if (!std::cout) throw pt::IoError("failed writing to standard output");
  } else {
    pt::emit_results(rows, o.out, format);
  }
}

int run_sweep(const Options& o, const pt::SweepConfig& config) {
  const pt::SweepResult result = pt::run_sweep(config);
  write(result.rows, o);
  if (result.partial) {
    std::cerr << "phasetrack: budget exceeded, results are partial\n";
    return kBudget;
  }
  return kOk;
}

int run_optimum(const Options& o) {
  const pt::Regime regime =
      o.regime.empty() ? pt::Regime::adaptive_coherent : pt::parse_regime(o.regime);
  pt::OptimumControls controls;
  controls.search_trajectories = o.search_trajectories;
  controls.final_trajectories = o.trajectories ? o.trajectories : 1024;
  controls.seed = o.seed;
  controls.max_cycles = o.max_cycles;
  controls.burn_in = o.burn_in;
  controls.horizon = o.horizon;
  controls.execution = execution(o);
  controls.budget_seconds = o.budget_secs;

  std::vector<pt::SweepRow> rows;
  bool incomplete = false;
  for (double N : n_grid(o, {1e4})) {
    const pt::OptimumResult best = pt::find_optimum(regime, N, controls);
    std::cerr << "optimum " << pt::to_string(regime) << " N=" << N << " X=" << best.X
              << " r=" << best.r << " epsilon=" << best.epsilon
              << " variance=" << best.variance.value << " +- " << best.variance.standard_error
              << " theory=" << best.theory_variance << " evaluations=" << best.evaluations
              << (best.converged ? "" : " (not converged)") << '\n';
    incomplete = incomplete || best.budget_exhausted || best.partial;
    rows.push_back(best.row);
  }
  pt::sort_rows(rows);
  write(rows, o);
  if (incomplete) {
    std::cerr << "phasetrack: budget exceeded, results are partial\n";
    return kBudget;
  }
  return kOk;
}

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

int run_theory(const Options& o) {
  const pt::Regime regime =
      o.regime.empty() ? pt::Regime::adaptive_coherent : pt::parse_regime(o.regime);
  const pt::OutputFormat format = pt::parse_format(o.format);
  nlohmann::json array = nlohmann::json::array();
  std::ostringstream csv;
  csv << "regime,N,X,r,theory_var,optimal_X,optimal_r,optimal_var\n";
  auto json_number = [](double v) {
    return std::isfinite(v) ? nlohmann::json(v) : nlohmann::json(nullptr);
  };
  for (double N : n_grid(o, {1, 10, 100, 1e3, 1e4})) {
    const auto best = pt::theory::optimal_parameters(regime, N);
    std::vector<double> xs = o.x_values;
    if (xs.empty()) xs.push_back(best.optimal_X);
    const double r = o.r_values.empty() ? best.optimal_r : o.r_values.front();
    for (double X : xs) {
      double predicted = std::numeric_limits<double>::quiet_NaN();
      try {
        predicted = pt::theory::predicted_variance(regime, N, X, r);
      } catch (const pt::ValidationError& e) {
        std::cerr << "phasetrack: " << e.what() << '\n';
      }
      csv << pt::to_string(regime) << ',' << fmt(N) << ',' << fmt(X) << ',' << fmt(r) << ','
          << fmt(predicted) << ',' << fmt(best.optimal_X) << ',' << fmt(best.optimal_r) << ','
          << fmt(best.variance) << '\n';
      array.push_back({{"regime", std::string(pt::to_string(regime))},
                       {"N", N},
                       {"X", json_number(X)},
                       {"r", r},
                       {"theory_var", json_number(predicted)},
                       {"optimal_X", json_number(best.optimal_X)},
                       {"optimal_r", best.optimal_r},
                       {"optimal_var", best.variance}});
    }
  }
  const std::string text = format == pt::OutputFormat::csv ? csv.str() : array.dump(2) + "\n";
  if (o.out.empty()) {
    std::cout << text;
    return kOk;
  }
  std::ofstream file(o.out, std::ios::binary);
  if (!file || !(file << text) || !file.flush()) {
    throw pt::IoError("cannot write '" + o.out + "'");
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Monte Carlo tracking of a diffusing optical phase"};
  app.require_subcommand(1);
  app.set_config("--config", "", "key = value file with default option values");

  Options o;
  app.add_option("--regime", o.regime,
                 "adaptive-coherent | heterodyne-coherent | adaptive-squeezed | "
                 "heterodyne-squeezed | mzi");
  app.add_option("--mode", o.mode, "adaptive | nonadaptive | heterodyne");
  app.add_option("--n", o.n_specs, "photon number N, or a:b:k for k log-spaced values")
      ->take_all();
  app.add_option("--x", o.x_values, "filter rate X (default: theoretical optimum)");
  app.add_option("--x-factor", o.x_factors, "multiples of the optimal X to simulate");
  app.add_option("--r", o.r_values, "squeezing parameter (default: theoretical optimum)");
  app.add_option("--epsilon", o.epsilon_values, "feedback interpolation exponent");
  app.add_option("--trajectories", o.trajectories,
                 "trajectories per point (default 1024; 100 repetitions for mzi)");
  app.add_option("--seed", o.seed, "master seed")->capture_default_str();
  app.add_option("--out", o.out, "output file (default: standard output)");
  app.add_option("--format", o.format, "csv | json")
      ->check(CLI::IsMember({"csv", "json"}))
      ->capture_default_str();
  app.add_option("--jobs", o.jobs, "worker threads (0 = all cores)")->capture_default_str();
  app.add_option("--budget-secs", o.budget_secs, "wall-clock budget per grid point")
      ->capture_default_str();
  app.add_option("--burn-in", o.burn_in, "override the burn-in (filter times or detections)");
  app.add_option("--horizon", o.horizon, "override the horizon (filter times or detections)");
  app.add_flag("--serial", o.serial, "use the single-threaded reference loop");
  app.add_option("--search-trajectories", o.search_trajectories,
                 "trajectories per optimum-search evaluation")
      ->capture_default_str();
  app.add_option("--max-cycles", o.max_cycles, "coordinate cycles for the optimum search")
      ->capture_default_str();

  auto* dyne = app.add_subcommand("dyne", "simulate dyne detection at the given points");
  auto* mzi = app.add_subcommand("mzi", "simulate the photon-counting interferometer");
  auto* sweep = app.add_subcommand("sweep", "run a grid over N, X, r and epsilon");
  auto* optimum = app.add_subcommand("optimum", "search for the variance-minimising parameters");
  auto* theory = app.add_subcommand("theory", "print analytic predictions without simulating");
  for (auto* sub : {dyne, mzi, sweep, optimum, theory}) sub->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kValidation;
  }

  try {
    if (*dyne) {
      return run_sweep(o, sweep_config(o, dyne_regime(o), {100}, {1.0}));
    }
    if (*mzi) {
      if (!o.regime.empty() && pt::parse_regime(o.regime) != pt::Regime::mzi) {
        throw pt::ValidationError("mzi: --regime must be mzi");
      }
      return run_sweep(o, sweep_config(o, pt::Regime::mzi, {100}, {1.0}));
    }
    if (*sweep) {
      const pt::Regime regime =
          o.regime.empty() ? pt::Regime::adaptive_coherent : pt::parse_regime(o.regime);
      return run_sweep(o, sweep_config(o, regime, {1, 10, 100, 1e3, 1e4},
                                       {0.25, 0.5, 1.0, 2.0, 4.0}));
    }
    if (*optimum) return run_optimum(o);
    if (*theory) return run_theory(o);
  } catch (const pt::IoError& e) {
    std::cerr << "phasetrack: " << e.what() << '\n';
    return kIo;
  } catch (const pt::ValidationError& e) {
    std::cerr << "phasetrack: " << e.what() << '\n';
    return kValidation;
  }
  return kValidation;
}
