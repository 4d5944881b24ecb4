#pragma once

#include <complex>
#include <cstdint>
#include <span>

#include "phasetrack/params.hpp"

namespace phasetrack {

/// Streaming sufficient statistics for wrapped tracking errors.
///
/// Merging is field-wise addition, so accumulators filled on different
/// threads combine associatively.
struct VarianceAccumulator {
  std::uint64_t count = 0;
  std::complex<double> sum_exp{0.0, 0.0};  ///< sum of e^{i delta}
  double sum = 0.0;
  double sum_sq = 0.0;
  /// Samples whose estimate was undefined. The dyne simulator skips them;
  /// the interferometer records them as a worst-case error of pi.
  std::uint64_t degenerate = 0;

  /// Adds one wrapped error; throws ValidationError when |delta| > pi.
  void add(double delta);
  void merge(const VarianceAccumulator& other);

  friend bool operator==(const VarianceAccumulator&,
                         const VarianceAccumulator&) = default;
};

VarianceAccumulator merge(VarianceAccumulator lhs, const VarianceAccumulator& rhs);

/// |<e^{i delta}>|^-2 - 1; +inf when the mean resultant vanishes.
double holevo_variance(const VarianceAccumulator& acc);

/// Population variance <delta^2> - <delta>^2 of the wrapped errors.
double standard_variance(const VarianceAccumulator& acc);

/// Point estimate and batch-means standard error of a variance measure.
struct VarianceEstimate {
  double value = 0.0;
  double standard_error = 0.0;
};

enum class VarianceKind { holevo, standard };

/// Pools all accumulators for the point estimate and groups them into
/// contiguous batches for the standard error. Accumulators are expected to
/// be per-trajectory, since samples inside one trajectory are correlated.
VarianceEstimate batch_estimate(std::span<const VarianceAccumulator> parts,
                                VarianceKind kind, std::size_t batches = 32);

enum class SamplingRegime { dyne_coherent, dyne_squeezed, mzi };

/// Equilibrium sampling plan.
///
/// Dyne plans are in units of 1/X; the interferometer plan counts
/// detections and repeats the whole run `repetitions` times.
struct SamplingPlan {
  double burn_in = 0.0;
  double cadence = 0.0;  ///< ignored when every_step is set
  bool every_step = false;
  double horizon = 0.0;
  std::uint64_t repetitions = 0;  ///< 0 for dyne plans (trajectory count rules)
};

/// `N` is only consulted for the interferometer plan.
SamplingPlan schedule(SamplingRegime regime, double N = 1.0);

/// Burn-in detection count ceil(10 sqrt N), never below 10.
std::uint64_t mzi_burn_in(double N);

}  // namespace phasetrack
