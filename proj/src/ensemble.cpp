#include "phasetrack/ensemble.hpp"

#include <algorithm>
#include <chrono>
#include <exception>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "phasetrack/dyne.hpp"
#include "phasetrack/interferometer.hpp"

namespace phasetrack {

namespace {

using Clock = std::chrono::steady_clock;

constexpr std::size_t kChunk = 64;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

// Fills results[i] = kernel(i) chunk by chunk, checking the budget between
// chunks. Returns the number of completed trajectories.
template <typename Result, typename Kernel>
std::size_t run_chunks(std::vector<Result>& results, Kernel&& kernel,
                       const EnsembleOptions& options, Clock::time_point start) {
  const std::size_t n = results.size();
  std::size_t done = 0;
  while (done < n) {
    if (done > 0 && seconds_since(start) > options.budget_seconds) break;
    const std::size_t end = std::min(n, done + kChunk);
    if (options.execution == Execution::serial) {
      for (std::size_t i = done; i < end; ++i) results[i] = kernel(i);
    } else {
      const auto lo = static_cast<long long>(done);
      const auto hi = static_cast<long long>(end);
      // Exceptions may not leave the parallel region; keep the first one.
      std::exception_ptr failure;
#ifdef _OPENMP
      const int threads = options.jobs > 0 ? options.jobs : omp_get_max_threads();
#pragma omp parallel for schedule(dynamic, 1) num_threads(threads)
#endif
      for (long long i = lo; i < hi; ++i) {
        try {
          results[static_cast<std::size_t>(i)] = kernel(static_cast<std::size_t>(i));
        } catch (...) {
#ifdef _OPENMP
#pragma omp critical(phasetrack_failure)
#endif
          if (!failure) failure = std::current_exception();
        }
      }
      if (failure) std::rethrow_exception(failure);
    }
    done = end;
  }
  return done;
}

}  // namespace

VarianceAccumulator EnsembleResult::pooled() const {
  VarianceAccumulator total;
  for (const auto& acc : trajectories) total.merge(acc);
  return total;
}

VarianceEstimate EnsembleResult::holevo() const {
  return batch_estimate(trajectories, VarianceKind::holevo);
}

VarianceEstimate EnsembleResult::standard() const {
  return batch_estimate(trajectories, VarianceKind::standard);
}

EnsembleResult run_dyne_ensemble(const SimParams& params, const EnsembleOptions& options) {
  validate(params);
  const auto start = Clock::now();
  std::vector<dyne::DyneTrajectoryResult> runs(params.trajectories);
  const std::size_t done = run_chunks(
      runs, [&](std::size_t i) { return dyne::run_dyne_trajectory(params, i); }, options,
      start);

  EnsembleResult out;
  out.partial = done < runs.size();
  out.trajectories.reserve(done);
  out.filter_power.reserve(done);
  for (std::size_t i = 0; i < done; ++i) {
    out.trajectories.push_back(runs[i].errors);
    out.filter_power.push_back(runs[i].mean_filter_power());
  }
  out.wall_seconds = seconds_since(start);
  return out;
}

EnsembleResult run_mzi_ensemble(const SimParams& params, const EnsembleOptions& options) {
  validate(params);
  const auto start = Clock::now();
  std::vector<mzi::MziTrajectoryResult> runs(params.trajectories);
  const std::size_t done = run_chunks(
      runs, [&](std::size_t i) { return mzi::run_mzi_trajectory(params, i); }, options, start);

  EnsembleResult out;
  out.partial = done < runs.size();
  out.trajectories.reserve(done);
  for (std::size_t i = 0; i < done; ++i) {
    out.trajectories.push_back(runs[i].errors);
    out.max_coefficients = std::max(out.max_coefficients, runs[i].max_coefficients);
  }
  out.wall_seconds = seconds_since(start);
  return out;
}

int available_threads() {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

}  // namespace phasetrack
