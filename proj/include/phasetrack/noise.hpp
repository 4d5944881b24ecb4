#pragma once

#include <cstdint>
#include <numbers>
#include <random>

namespace phasetrack {

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// Random source owned by a single trajectory.
///
/// The engine is seeded from (master seed, stream index) through
/// std::seed_seq, so the same pair always reproduces the same draws and
/// different indices give unrelated sequences.
class NoiseStream {
 public:
  NoiseStream(std::uint64_t seed, std::uint64_t stream_index);

  /// Standard normal draw.
  double normal() { return normal_(engine_); }

  /// Uniform draw on the open interval (0, 1).
  double uniform() {
    double u;
    do {
      u = uniform_(engine_);
    } while (u <= 0.0);
    return u;
  }

  /// Unit-rate exponential waiting time.
  double exponential();

 private:
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_{0.0, 1.0};
  std::uniform_real_distribution<double> uniform_{0.0, 1.0};
};

/// Advances a diffusing phase by sqrt(kappa dt) xi. No wrapping is applied.
double step_phase(double phi, double kappa, double dt, double xi);

/// Maps an angle onto (-pi, pi].
double wrap_to_pi(double delta);

/// Waiting time -ln(u)/flux for a Poisson detection process.
double sample_interval(double flux, double u);

}  // namespace phasetrack
