#pragma once

#include <cstdint>
#include <iosfwd>
#include <limits>
#include <string>
#include <string_view>
#include <vector>

#include "phasetrack/ensemble.hpp"
#include "phasetrack/params.hpp"
#include "phasetrack/stats.hpp"

namespace phasetrack {

/// Grid of experiments. Empty x_values means "x_factors times the
/// theoretical optimum"; empty r_values / epsilon_values select the regime
/// defaults (see default_r, default_epsilon).
struct SweepConfig {
  Regime regime = Regime::adaptive_coherent;
  Mode mzi_mode = Mode::adaptive;  ///< dyne regimes imply their own mode
  std::vector<double> n_values;
  std::vector<double> x_values;
  std::vector<double> x_factors{1.0};
  std::vector<double> r_values;
  std::vector<double> epsilon_values;
  std::uint64_t trajectories = 0;  ///< 0 = 1024 (dyne) or 100 (interferometer)
  std::uint64_t seed = 1;
  double burn_in = 0.0;  ///< optional sampling-plan overrides
  double horizon = 0.0;
  EnsembleOptions execution;  ///< budget_seconds applies per grid point
};

struct SweepRow {
  std::string regime;
  double N = 0.0;
  double X = 0.0;        ///< NaN for the interferometer
  double r = 0.0;
  double epsilon = 0.0;  ///< NaN where no epsilon feedback is used
  std::string mode;
  double holevo_var = 0.0;
  double holevo_se = 0.0;
  double std_var = 0.0;
  double std_se = 0.0;
  double theory_var = 0.0;  ///< NaN when the formula has no stable value
  double ratio = 0.0;
  std::uint64_t samples = 0;
  double wall_s = 0.0;
};

struct SweepResult {
  std::vector<SweepRow> rows;
  bool partial = false;  ///< some grid point ran out of budget
};

std::uint64_t default_trajectories(Regime regime);
double default_r(Regime regime, double N);
/// 1 (arg A feedback) for adaptive-coherent, min(1, 1.5 N^-0.35) for
/// adaptive-squeezed, NaN for regimes without epsilon feedback.
double default_epsilon(Regime regime, double N);

/// Builds the SimParams for one grid point of `regime`.
SimParams make_params(Regime regime, Mode mzi_mode, double N, double X, double r,
                      double epsilon, std::uint64_t trajectories, std::uint64_t seed);

/// Runs one point and packages it as a row.
SweepRow run_point(Regime regime, const SimParams& params, const EnsembleOptions& execution,
                   bool* partial = nullptr);

/// Executes every grid point; rows are sorted by (N, X, r, epsilon). Every
/// point uses the same seed, so neighbouring points share their noise.
SweepResult run_sweep(const SweepConfig& config);

/// Controls for the coordinate-wise golden-section search.
struct OptimumControls {
  std::uint64_t search_trajectories = 32;
  std::uint64_t final_trajectories = 1024;
  std::uint64_t seed = 1;
  std::size_t evaluations_per_coordinate = 8;
  std::size_t max_cycles = 3;
  double improvement_tolerance = 0.02;
  /// Wall-clock limit for the search phase; the final run is not counted.
  double budget_seconds = std::numeric_limits<double>::infinity();
  double burn_in = 0.0;
  double horizon = 0.0;
  EnsembleOptions execution;
};

struct OptimumResult {
  Regime regime = Regime::adaptive_coherent;
  double N = 0.0;
  double X = 0.0;
  double r = 0.0;
  double epsilon = 0.0;
  VarianceEstimate variance;       ///< Holevo, from the final run
  double search_variance = 0.0;    ///< best objective seen during the search
  double theory_variance = 0.0;    ///< optimal_parameters(regime, N).variance
  std::size_t evaluations = 0;
  bool converged = false;          ///< false: cycle or time budget ran out first
  bool budget_exhausted = false;   ///< search stopped on budget_seconds
  bool partial = false;            ///< final run stopped on its own budget
  SweepRow row;                    ///< final run; theory_var at the row's own parameters
};

/// Coordinate descent over the regime's free parameters (X; X and r;
/// X, e^{-2r} and epsilon), seeded at the theoretical optimum, cycling until
/// a cycle improves the variance by less than improvement_tolerance.
/// Throws ValidationError for the interferometer (nothing to search).
OptimumResult find_optimum(Regime regime, double N, const OptimumControls& controls);

enum class OutputFormat { csv, json };
OutputFormat parse_format(std::string_view text);

inline constexpr std::string_view kCsvHeader =
    "regime,N,X,r,epsilon,mode,holevo_var,holevo_se,std_var,std_se,theory_var,ratio,samples,wall_s";

/// Writes rows as CSV (9 significant digits) or as a JSON array.
/// Throws ValidationError for an empty row set.
void write_results(const std::vector<SweepRow>& rows, std::ostream& out, OutputFormat format);

/// write_results into `path`; throws IoError naming the path on failure.
void emit_results(const std::vector<SweepRow>& rows, const std::string& path,
                  OutputFormat format);

/// Inverse of the JSON form of write_results.
std::vector<SweepRow> parse_results_json(std::string_view text);

/// Parses one --n value: a number, or "a:b:k" for k log-spaced points from
/// a to b inclusive.
std::vector<double> parse_n_grid(std::string_view text);

/// Orders rows by (N, X, r, epsilon); NaN sorts first.
void sort_rows(std::vector<SweepRow>& rows);

}  // namespace phasetrack
