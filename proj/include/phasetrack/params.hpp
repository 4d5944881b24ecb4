#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

namespace phasetrack {

/// Thrown for any parameter that violates a documented precondition.
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Thrown when results cannot be written or read.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Local-oscillator / interferometer control policy. For dyne detection
/// `nonadaptive` is heterodyne detection; for the interferometer it is the
/// linear phase ramp.
enum class Mode { adaptive, nonadaptive };

/// Experiment families with closed-form predictions.
enum class Regime {
  adaptive_coherent,
  heterodyne_coherent,
  adaptive_squeezed,
  heterodyne_squeezed,
  mzi,
};

std::string_view to_string(Mode mode);
std::string_view to_string(Regime regime);
Mode parse_mode(std::string_view text);
Regime parse_regime(std::string_view text);

bool is_dyne(Regime regime);
bool is_squeezed(Regime regime);

/// Dimensionless description of one experiment.
///
/// Time is measured in units of |alpha|^-2, so the photon flux is 1, the
/// phase diffusion rate is kappa = 1/N and the filter rate is chi = X.
struct SimParams {
  double N = 1.0;         ///< photons per coherence time
  double X = 1.0;         ///< filter bandwidth chi/|alpha|^2 (dyne only)
  double r = 0.0;         ///< squeezing magnitude, 0 = coherent beam
  double epsilon = 1.0;   ///< feedback interpolation; 1 selects arg A (mark II)
  Mode mode = Mode::adaptive;
  std::uint64_t trajectories = 1024;
  std::uint64_t seed = 1;

  // Sampling-plan overrides. Non-positive values select the default plan.
  // Dyne: units of 1/chi. Interferometer: detections.
  double burn_in = 0.0;
  double horizon = 0.0;

  double kappa() const { return 1.0 / N; }
  double chi() const { return X; }
};

/// Throws ValidationError unless N > 0, X > 0, r >= 0, epsilon in [0, 1]
/// and trajectories >= 1.
void validate(const SimParams& params);

/// Dyne regime implied by (mode, r).
Regime dyne_regime(const SimParams& params);

}  // namespace phasetrack
