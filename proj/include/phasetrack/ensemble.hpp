#pragma once

#include <cstddef>
#include <limits>
#include <vector>

#include "phasetrack/params.hpp"
#include "phasetrack/stats.hpp"

namespace phasetrack {

/// `serial` is the reference loop kept for testing; `parallel` distributes
/// trajectories over OpenMP threads. Both produce bit-identical results
/// because every trajectory owns its noise stream and results are merged in
/// trajectory order.
enum class Execution { serial, parallel };

struct EnsembleOptions {
  Execution execution = Execution::parallel;
  int jobs = 0;  ///< OpenMP threads, 0 = runtime default
  /// Wall-clock budget; once exceeded, remaining trajectories are dropped
  /// and the result is flagged partial.
  double budget_seconds = std::numeric_limits<double>::infinity();
};

struct EnsembleResult {
  std::vector<VarianceAccumulator> trajectories;
  std::vector<double> filter_power;  ///< dyne: per-trajectory mean |A|^2
  std::size_t max_coefficients = 0;  ///< interferometer: largest posterior size
  bool partial = false;
  double wall_seconds = 0.0;

  VarianceAccumulator pooled() const;
  VarianceEstimate holevo() const;
  VarianceEstimate standard() const;
};

/// Runs params.trajectories dyne trajectories (streams 0..n-1).
EnsembleResult run_dyne_ensemble(const SimParams& params, const EnsembleOptions& options = {});

/// Runs params.trajectories interferometer repetitions (streams 0..n-1).
EnsembleResult run_mzi_ensemble(const SimParams& params, const EnsembleOptions& options = {});

/// Number of OpenMP threads available (1 without OpenMP).
int available_threads();

}  // namespace phasetrack
