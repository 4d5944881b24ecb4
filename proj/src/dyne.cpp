#include "phasetrack/dyne.hpp"

#include <cmath>

#include "phasetrack/noise.hpp"

namespace phasetrack::dyne {

double coherent_increment(double phi, double Phi, double dt, double dw) {
  return 2.0 * std::cos(phi - Phi) * dt + dw;
}

SqueezeParams::SqueezeParams(double r_)
    : r(r_), squeezed_variance(std::exp(-2.0 * r_)), antisqueezed_variance(std::exp(2.0 * r_)) {
  if (!(r_ >= 0.0)) throw ValidationError("squeezed_increment: r must be >= 0");
}

double squeezed_increment(double phi, double Phi, const SqueezeParams& squeeze, double dt,
                          double dw) {
  if (squeeze.r == 0.0) return coherent_increment(phi, Phi, dt, dw);
  // Phi - phi_zeta/2 = Phi - phi - pi/2
  const double s = std::sin(Phi - phi);
  const double c = std::cos(Phi - phi);
  const double factor =
      std::sqrt(squeeze.squeezed_variance * s * s + squeeze.antisqueezed_variance * c * c);
  return 2.0 * c * dt + dw * factor;
}

double squeezed_increment(double phi, double Phi, double r, double dt, double dw) {
  return squeezed_increment(phi, Phi, SqueezeParams(r), dt, dw);
}

DyneState update_filter(DyneState state, double i_dt, double chi, double dt) {
  const Complex rotor = std::polar(1.0, state.Phi);
  const Complex A = state.A;
  const Complex B = state.B;
  state.A = A + rotor * i_dt - chi * A * dt;
  state.B = B - rotor * rotor * dt - chi * B * dt;
  return state;
}

double mark2_feedback(Complex A, double previous) {
  if (A == Complex{}) return previous;
  return std::arg(A) + kPi / 2.0;
}

Complex combined_filter(Complex A, Complex B, double chi) {
  return A + chi * B * std::conj(A);
}

double epsilon_feedback(Complex A, Complex B, double chi, double epsilon,
                        double previous) {
  if (epsilon == 1.0) return mark2_feedback(A, previous);
  const Complex C = combined_filter(A, B, chi);
  if (C == Complex{}) return mark2_feedback(A, previous);
  const double arg_c = std::arg(C);
  if (A == Complex{}) return arg_c + kPi / 2.0;
  const double estimate = arg_c + epsilon * wrap_to_pi(std::arg(A) - arg_c);
  return estimate + kPi / 2.0;
}

double heterodyne_feedback(double t, double delta) {
  if (!(delta > 0.0)) throw ValidationError("heterodyne_feedback: delta must be positive");
  double phase = std::fmod(delta * t, kTwoPi);
  if (phase < 0.0) phase += kTwoPi;
  return phase;
}

double heterodyne_detuning(double chi) { return kTwoPi * 50.0 * chi; }

std::optional<double> best_estimate(Complex A, Complex B, double chi) {
  const Complex C = combined_filter(A, B, chi);
  if (C == Complex{}) return std::nullopt;
  return std::arg(C);
}

StepPlan step_plan(const SimParams& params) {
  const SamplingPlan plan = schedule(
      params.r > 0.0 ? SamplingRegime::dyne_squeezed : SamplingRegime::dyne_coherent);
  const double burn_in = params.burn_in > 0.0 ? params.burn_in : plan.burn_in;
  const double horizon = params.horizon > 0.0 ? params.horizon : plan.horizon;
  StepPlan steps;
  steps.burn_in_steps = static_cast<std::uint64_t>(std::llround(burn_in * kStepsPerFilterTime));
  steps.total_steps = static_cast<std::uint64_t>(std::llround(horizon * kStepsPerFilterTime));
  if (steps.total_steps < steps.burn_in_steps || steps.total_steps == 0) {
    throw ValidationError("dyne: horizon must not be shorter than the burn-in");
  }
  steps.cadence_steps =
      plan.every_step ? 1
                      : static_cast<std::uint64_t>(std::llround(plan.cadence * kStepsPerFilterTime));
  return steps;
}

DyneTrajectoryResult run_dyne_trajectory(const SimParams& params,
                                         std::uint64_t trajectory_index) {
  validate(params);
  const StepPlan steps = step_plan(params);
  const double chi = params.chi();
  const double kappa = params.kappa();
  const double dt = 1.0 / (kStepsPerFilterTime * params.X);
  const double sqrt_dt = std::sqrt(dt);
  const bool adaptive = params.mode == Mode::adaptive;
  const double detuning = heterodyne_detuning(chi);
  const SqueezeParams squeeze(params.r);

  NoiseStream noise(params.seed, trajectory_index);
  DyneState state;
  DyneTrajectoryResult out;

  for (std::uint64_t step = 1; step <= steps.total_steps; ++step) {
    const double dw = sqrt_dt * noise.normal();
    const double xi = noise.normal();
    const double i_dt = squeezed_increment(state.phi, state.Phi, squeeze, dt, dw);
    state = update_filter(state, i_dt, chi, dt);
    state.phi = step_phase(state.phi, kappa, dt, xi);
    state.t = static_cast<double>(step) * dt;

    if (adaptive) {
      state.Phi = epsilon_feedback(state.A, state.B, chi, params.epsilon, state.Phi);
    } else {
      state.Phi = heterodyne_feedback(state.t, detuning);
    }

    if (step < steps.burn_in_steps ||
        (step - steps.burn_in_steps) % steps.cadence_steps != 0) {
      continue;
    }
    std::optional<double> theta;
    if (adaptive) {
      theta = best_estimate(state.A, state.B, chi);
    } else if (state.A != Complex{}) {
      theta = std::arg(state.A);
    }
    if (theta) {
      out.errors.add(wrap_to_pi(*theta - state.phi));
    } else {
      ++out.errors.degenerate;
    }
    out.filter_power_sum += std::norm(state.A);
    ++out.filter_power_samples;
  }
  return out;
}

}  // namespace phasetrack::dyne
