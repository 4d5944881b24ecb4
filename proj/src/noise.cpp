#include "phasetrack/noise.hpp"

#include <cmath>

#include "phasetrack/params.hpp"

namespace phasetrack {

namespace {

std::seed_seq make_seed_seq(std::uint64_t seed, std::uint64_t index) {
  return std::seed_seq{
      static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
      static_cast<std::uint32_t>(index),
      static_cast<std::uint32_t>(index >> 32)};
}

}  // namespace

NoiseStream::NoiseStream(std::uint64_t seed, std::uint64_t stream_index) {
  auto seq = make_seed_seq(seed, stream_index);
  engine_.seed(seq);
}

double NoiseStream::exponential() { return sample_interval(1.0, uniform()); }

double step_phase(double phi, double kappa, double dt, double xi) {
  if (!(dt > 0.0)) throw ValidationError("step_phase: dt must be positive");
  if (!(kappa >= 0.0)) throw ValidationError("step_phase: kappa must be >= 0");
  return phi + std::sqrt(kappa * dt) * xi;
}

double wrap_to_pi(double delta) {
  double wrapped = std::remainder(delta, kTwoPi);  // [-pi, pi]
  if (wrapped <= -kPi) wrapped += kTwoPi;
  return wrapped;
}

double sample_interval(double flux, double u) {
  if (!(flux > 0.0)) throw ValidationError("sample_interval: flux must be positive");
  if (!(u > 0.0 && u < 1.0)) {
    throw ValidationError("sample_interval: u must lie in (0, 1)");
  }
  return -std::log(u) / flux;
}

}  // namespace phasetrack
