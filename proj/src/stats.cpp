#include "phasetrack/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "phasetrack/noise.hpp"

namespace phasetrack {

void VarianceAccumulator::add(double delta) {
  if (!(std::abs(delta) <= kPi)) {
    throw ValidationError("add_sample: error must be wrapped to (-pi, pi]");
  }
  ++count;
  sum_exp += std::polar(1.0, delta);
  sum += delta;
  sum_sq += delta * delta;
}

void VarianceAccumulator::merge(const VarianceAccumulator& other) {
  count += other.count;
  sum_exp += other.sum_exp;
  sum += other.sum;
  sum_sq += other.sum_sq;
  degenerate += other.degenerate;
}

VarianceAccumulator merge(VarianceAccumulator lhs, const VarianceAccumulator& rhs) {
  lhs.merge(rhs);
  return lhs;
}

double holevo_variance(const VarianceAccumulator& acc) {
  if (acc.count == 0) throw ValidationError("holevo_variance: no samples");
  const double resultant = std::abs(acc.sum_exp) / static_cast<double>(acc.count);
  if (resultant == 0.0) return std::numeric_limits<double>::infinity();
  return 1.0 / (resultant * resultant) - 1.0;
}

double standard_variance(const VarianceAccumulator& acc) {
  if (acc.count < 2) throw ValidationError("standard_variance: need two samples");
  const double n = static_cast<double>(acc.count);
  const double mean = acc.sum / n;
  return std::max(0.0, acc.sum_sq / n - mean * mean);
}

VarianceEstimate batch_estimate(std::span<const VarianceAccumulator> parts,
                                VarianceKind kind, std::size_t batches) {
  auto measure = [kind](const VarianceAccumulator& acc) {
    return kind == VarianceKind::holevo ? holevo_variance(acc)
                                        : standard_variance(acc);
  };

  VarianceAccumulator pooled;
  for (const auto& part : parts) pooled.merge(part);

  VarianceEstimate out;
  out.value = measure(pooled);

  const std::size_t nb = std::min(batches, parts.size());
  if (nb < 2) {
    out.standard_error = std::numeric_limits<double>::quiet_NaN();
    return out;
  }
  std::vector<double> values;
  values.reserve(nb);
  for (std::size_t b = 0; b < nb; ++b) {
    const std::size_t lo = b * parts.size() / nb;
    const std::size_t hi = (b + 1) * parts.size() / nb;
    VarianceAccumulator batch;
    for (std::size_t i = lo; i < hi; ++i) batch.merge(parts[i]);
    values.push_back(measure(batch));
  }
  double mean = 0.0;
  for (double v : values) mean += v;
  mean /= static_cast<double>(nb);
  double ss = 0.0;
  for (double v : values) ss += (v - mean) * (v - mean);
  out.standard_error = std::sqrt(ss / static_cast<double>(nb - 1) / static_cast<double>(nb));
  return out;
}

std::uint64_t mzi_burn_in(double N) {
  const double raw = std::ceil(10.0 * std::sqrt(N));
  return std::max<std::uint64_t>(10, static_cast<std::uint64_t>(raw));
}

SamplingPlan schedule(SamplingRegime regime, double N) {
  switch (regime) {
    case SamplingRegime::dyne_coherent:
      return {.burn_in = 10.0, .cadence = 1.0, .every_step = false, .horizon = 100.0};
    case SamplingRegime::dyne_squeezed:
      return {.burn_in = 30.0, .cadence = 0.0, .every_step = true, .horizon = 130.0};
    case SamplingRegime::mzi:
      if (!(N > 0.0)) throw ValidationError("schedule: N must be positive");
      return {.burn_in = static_cast<double>(mzi_burn_in(N)),
              .cadence = 1.0,
              .every_step = false,
              .horizon = 1e5,
              .repetitions = 100};
  }
  throw ValidationError("schedule: unknown regime");
}

}  // namespace phasetrack
