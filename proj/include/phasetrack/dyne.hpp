#pragma once

#include <complex>
#include <cstdint>
#include <optional>

#include "phasetrack/params.hpp"
#include "phasetrack/stats.hpp"

namespace phasetrack::dyne {

using Complex = std::complex<double>;

/// Live state of one dyne trajectory.
///
/// A and B are the exponentially weighted filters
///   A_t = int e^{chi(u-t)} e^{i Phi} I(u) du,
///   B_t = -int e^{chi(u-t)} e^{2 i Phi} du,
/// so |B| <= 1/chi always holds.
struct DyneState {
  double t = 0.0;
  double phi = 0.0;  ///< true system phase, unwrapped
  Complex A{0.0, 0.0};
  Complex B{0.0, 0.0};
  double Phi = 0.0;  ///< local-oscillator phase
};

/// Photocurrent increment I dt = 2 Re(e^{i phi} e^{-i Phi}) dt + dW for a
/// coherent beam with |alpha| = 1. `dw` is the Wiener increment (already
/// scaled by sqrt(dt)).
double coherent_increment(double phi, double Phi, double dt, double dw);

/// Squeezing magnitude with its quadrature noise variances cached. The
/// squeezing phase is always 2 phi + pi, so it is not stored.
struct SqueezeParams {
  explicit SqueezeParams(double r);

  double r;
  double squeezed_variance;      ///< e^{-2r}
  double antisqueezed_variance;  ///< e^{2r}
};

/// Broadband-squeezed photocurrent with squeezing phase 2 phi + pi.
/// Returns coherent_increment unchanged when r == 0.
double squeezed_increment(double phi, double Phi, const SqueezeParams& squeeze, double dt,
                          double dw);
double squeezed_increment(double phi, double Phi, double r, double dt, double dw);

/// One Euler-Maruyama step of the A and B filters using state.Phi.
DyneState update_filter(DyneState state, double i_dt, double chi, double dt);

/// arg A + pi/2, or `previous` while A is still zero.
double mark2_feedback(Complex A, double previous);

/// Feedback on the intermediate estimate arg(C^{1-eps} A^eps), evaluated as
/// arg C + eps * wrap(arg A - arg C) with C = A + chi B A*. Returns
/// estimate + pi/2; keeps `previous` when A and C both vanish.
double epsilon_feedback(Complex A, Complex B, double chi, double epsilon,
                        double previous);

/// Ramp Phi = delta t reduced to [0, 2 pi).
double heterodyne_feedback(double t, double delta);

/// Detuning used for heterodyne runs: 50 turns per filter memory time 1/chi.
double heterodyne_detuning(double chi);

/// C = A + chi B A*.
Complex combined_filter(Complex A, Complex B, double chi);

/// arg C, or nothing when C == 0.
std::optional<double> best_estimate(Complex A, Complex B, double chi);

/// Per-trajectory output: wrapped tracking errors plus the sampled |A|^2.
struct DyneTrajectoryResult {
  VarianceAccumulator errors;
  double filter_power_sum = 0.0;
  std::uint64_t filter_power_samples = 0;

  double mean_filter_power() const {
    return filter_power_samples ? filter_power_sum / static_cast<double>(filter_power_samples)
                                : 0.0;
  }
};

/// Integer step layout derived from the sampling plan and dt = 1/(1000 X).
struct StepPlan {
  std::uint64_t burn_in_steps = 0;
  std::uint64_t cadence_steps = 1;
  std::uint64_t total_steps = 0;
};

inline constexpr double kStepsPerFilterTime = 1000.0;

/// Throws ValidationError when the horizon is shorter than the burn-in.
StepPlan step_plan(const SimParams& params);

/// Integrates one trajectory using noise stream `trajectory_index`.
DyneTrajectoryResult run_dyne_trajectory(const SimParams& params,
                                         std::uint64_t trajectory_index);

}  // namespace phasetrack::dyne
