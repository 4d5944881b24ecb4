#pragma once

#include <complex>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "phasetrack/noise.hpp"
#include "phasetrack/params.hpp"
#include "phasetrack/stats.hpp"

namespace phasetrack::mzi {

using Complex = std::complex<double>;

inline constexpr double kDefaultThreshold = 1e-20;

/// Phase posterior sum_k P_k e^{ik phi} stored for k >= 0 with P_0 = 1.
/// Negative orders are conjugates of the stored ones.
class FourierPosterior {
 public:
  explicit FourierPosterior(double kappa, double threshold = kDefaultThreshold);
  FourierPosterior(std::vector<Complex> coeffs, double kappa,
                   double threshold = kDefaultThreshold);

  /// P_k for any integer k; zero beyond the stored range.
  Complex coefficient(long k) const;
  std::span<const Complex> coefficients() const { return coeffs_; }
  std::size_t size() const { return coeffs_.size(); }
  double kappa() const { return kappa_; }
  double threshold() const { return threshold_; }

  /// Multiplies by the likelihood of outcome u at control phase Phi,
  /// renormalises to P_0 = 1 and drops trailing coefficients below the
  /// threshold. Throws ValidationError for a zero-probability outcome.
  void update(double Phi, int u);

  /// Convolves with the phase-diffusion kernel over `dt`:
  /// P_k *= exp(-k^2 kappa dt / 2).
  void diffuse(double dt);

  /// Density value sum_k P_k e^{ik phi} (real up to rounding).
  Complex density(double phi) const;

 private:
  void truncate();

  std::vector<Complex> coeffs_;
  std::vector<Complex> scratch_;
  double kappa_;
  double threshold_;
};

/// sin^2((phi - Phi + u pi)/2).
double detection_probability(double phi, double Phi, int u);

FourierPosterior bayes_update(FourierPosterior post, double Phi, int u);
FourierPosterior diffuse_posterior(FourierPosterior post, double dt);

/// arg <e^{i phi}> = arg conj(P_1); nothing when P_1 == 0.
std::optional<double> phase_estimate(const FourierPosterior& post);

struct CostCoefficients {
  Complex a;
  Complex b;
  Complex c;
};

/// a = conj(P_1), b = conj(P_2)/2, c = P_0/2 of the prior for the next detection.
CostCoefficients extract_abc(const FourierPosterior& post);

/// M(Phi) = |a - z| + |a + z| with z = b e^{-i Phi} + c e^{i Phi}: the
/// outcome-weighted sharpness |<e^{i phi}>| after the next detection, up to
/// the common normalisation. Larger M means smaller expected Holevo variance.
double expected_cost(Complex a, Complex b, Complex c, double Phi);
inline double expected_cost(const CostCoefficients& k, double Phi) {
  return expected_cost(k.a, k.b, k.c, Phi);
}

/// Global maximiser of expected_cost, in [origin, origin + pi). M has period
/// pi, so this covers every distinct choice. A 256-point grid anchored at
/// `origin` is refined by golden-section search to 1e-6 rad. Returns
/// `origin` when the cost is constant.
double adaptive_phi(const FourierPosterior& post, double origin = 0.0);

/// Linear ramp Phi0 + m pi / sqrt(N), or Phi0 + m pi / 2 when N <= 1.
double nonadaptive_phi(std::uint64_t m, double Phi0, double N);

/// One detection of the tracker.
struct Detection {
  std::uint64_t index = 0;
  double time = 0.0;
  double phi = 0.0;  ///< true phase at the detection (unwrapped)
  double Phi = 0.0;
  int u = 0;
};

/// Detection history n_m with the control phases and true phases.
struct MziRecord {
  std::vector<Detection> detections;
};

/// Bayesian tracker for one interferometer trajectory.
///
/// `offset` rotates the whole experiment: the initial true phase, the ramp
/// origin and the adaptive grid anchor all start at `offset`.
class MziTracker {
 public:
  MziTracker(const SimParams& params, std::uint64_t trajectory_index,
             double offset = 0.0);

  Detection step();
  const FourierPosterior& posterior() const { return posterior_; }
  double true_phase() const { return phi_; }

 private:
  SimParams params_;
  NoiseStream noise_;
  FourierPosterior posterior_;
  double phi_;
  double offset_;
  double ramp_origin_;
  double time_ = 0.0;
  std::uint64_t m_ = 0;
};

struct MziTrajectoryResult {
  VarianceAccumulator errors;
  std::size_t max_coefficients = 0;
  std::uint64_t detections = 0;
};

/// Burn-in and horizon (in detections) after applying SimParams overrides.
/// Throws ValidationError unless horizon > burn-in.
struct DetectionPlan {
  std::uint64_t burn_in = 0;
  std::uint64_t horizon = 0;
};
DetectionPlan detection_plan(const SimParams& params);

/// Runs one trajectory and samples wrap(estimate - phi) after every
/// detection past burn-in. Undefined estimates count as an error of pi.
MziTrajectoryResult run_mzi_trajectory(const SimParams& params,
                                       std::uint64_t trajectory_index,
                                       double offset = 0.0);

/// Runs `detections` steps and returns the full history.
MziRecord record_mzi(const SimParams& params, std::uint64_t trajectory_index,
                     std::uint64_t detections, double offset = 0.0);

}  // namespace phasetrack::mzi
