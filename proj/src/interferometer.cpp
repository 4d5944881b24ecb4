#include "phasetrack/interferometer.hpp"

#include <array>
#include <cmath>
#include <string>

#include "phasetrack/golden.hpp"

namespace phasetrack::mzi {

namespace {

constexpr std::size_t kGridPoints = 256;
constexpr double kRefineTolerance = 1e-6;

// M is pi-periodic (z changes sign under Phi -> Phi + pi), so one half
// period is searched.
const std::array<Complex, kGridPoints>& grid_rotors() {
  static const auto table = [] {
    std::array<Complex, kGridPoints> t{};
    for (std::size_t j = 0; j < kGridPoints; ++j) {
      t[j] = std::polar(1.0, kPi * static_cast<double>(j) / kGridPoints);
    }
    return t;
  }();
  return table;
}

// expected_cost with the rotor e^{i Phi} precomputed.
double cost_at(const CostCoefficients& k, Complex rotor) {
  const Complex z = k.b * std::conj(rotor) + k.c * rotor;
  return std::sqrt(std::norm(k.a - z)) + std::sqrt(std::norm(k.a + z));
}

void check_outcome(int u) {
  if (u != 0 && u != 1) throw ValidationError("detector index must be 0 or 1");
}

}  // namespace

FourierPosterior::FourierPosterior(double kappa, double threshold)
    : coeffs_{Complex{1.0, 0.0}}, kappa_(kappa), threshold_(threshold) {
  if (!(kappa >= 0.0)) throw ValidationError("posterior: kappa must be >= 0");
}

FourierPosterior::FourierPosterior(std::vector<Complex> coeffs, double kappa,
                                   double threshold)
    : coeffs_(std::move(coeffs)), kappa_(kappa), threshold_(threshold) {
  if (coeffs_.empty()) coeffs_.push_back(1.0);
  if (coeffs_[0] == Complex{}) throw ValidationError("posterior: P_0 must be non-zero");
  const Complex p0 = coeffs_[0];
  for (auto& p : coeffs_) p /= p0;
  coeffs_[0] = 1.0;
  truncate();
}

Complex FourierPosterior::coefficient(long k) const {
  const auto index = static_cast<std::size_t>(k < 0 ? -k : k);
  if (index >= coeffs_.size()) return {};
  return k < 0 ? std::conj(coeffs_[index]) : coeffs_[index];
}

void FourierPosterior::update(double Phi, int u) {
  check_outcome(u);
  // w = e^{i(Phi - u pi)}
  const Complex w = (u == 1 ? -1.0 : 1.0) * std::polar(1.0, Phi);
  const Complex half_w = 0.5 * w;
  const Complex half_wc = 0.5 * std::conj(w);
  const std::size_t n = coeffs_.size();

  scratch_.assign(n + 1, Complex{});
  for (std::size_t k = 0; k <= n; ++k) {
    const Complex here = k < n ? coeffs_[k] : Complex{};
    const Complex below = k == 0 ? (n > 1 ? std::conj(coeffs_[1]) : Complex{})
                                 : coeffs_[k - 1];
    const Complex above = k + 1 < n ? coeffs_[k + 1] : Complex{};
    scratch_[k] = here - half_wc * below - half_w * above;
  }
  const double norm = scratch_[0].real();
  if (!(norm > 0.0)) {
    throw ValidationError("bayes_update: outcome has zero probability under the posterior");
  }
  const double inv = 1.0 / norm;
  for (auto& p : scratch_) p *= inv;
  scratch_[0] = 1.0;
  coeffs_.swap(scratch_);
  truncate();
}

void FourierPosterior::diffuse(double dt) {
  if (!(dt >= 0.0)) throw ValidationError("diffuse_posterior: dt must be >= 0");
  if (dt == 0.0 || kappa_ == 0.0) return;
  // exp(-k^2 a) built from exp(-(2k+1) a) increments.
  const double a = kappa_ * dt / 2.0;
  const double q = std::exp(-a);
  const double q2 = q * q;
  double factor = 1.0;
  double step = q;
  for (std::size_t k = 1; k < coeffs_.size(); ++k) {
    factor *= step;
    step *= q2;
    coeffs_[k] *= factor;
  }
  truncate();
}

Complex FourierPosterior::density(double phi) const {
  Complex total = coeffs_[0];
  for (std::size_t k = 1; k < coeffs_.size(); ++k) {
    const Complex rot = std::polar(1.0, static_cast<double>(k) * phi);
    total += coeffs_[k] * rot + std::conj(coeffs_[k] * rot);
  }
  return total;
}

void FourierPosterior::truncate() {
  while (coeffs_.size() > 1 && std::abs(coeffs_.back()) < threshold_) {
    coeffs_.pop_back();
  }
}

double detection_probability(double phi, double Phi, int u) {
  check_outcome(u);
  const double s = std::sin((phi - Phi) / 2.0);
  const double dark = s * s;
  return u == 0 ? dark : 1.0 - dark;
}

FourierPosterior bayes_update(FourierPosterior post, double Phi, int u) {
  post.update(Phi, u);
  return post;
}

FourierPosterior diffuse_posterior(FourierPosterior post, double dt) {
  post.diffuse(dt);
  return post;
}

std::optional<double> phase_estimate(const FourierPosterior& post) {
  const Complex p1 = post.coefficient(1);
  if (p1 == Complex{}) return std::nullopt;
  return std::arg(std::conj(p1));
}

CostCoefficients extract_abc(const FourierPosterior& post) {
  return {post.coefficient(-1), 0.5 * post.coefficient(-2), 0.5 * post.coefficient(0)};
}

double expected_cost(Complex a, Complex b, Complex c, double Phi) {
  return cost_at({a, b, c}, std::polar(1.0, Phi));
}

double adaptive_phi(const FourierPosterior& post, double origin) {
  const CostCoefficients k = extract_abc(post);
  const Complex anchor = std::polar(1.0, origin);
  const auto& rotors = grid_rotors();

  std::size_t best = 0;
  double best_value = cost_at(k, anchor * rotors[0]);
  double worst_value = best_value;
  for (std::size_t j = 1; j < kGridPoints; ++j) {
    const double value = cost_at(k, anchor * rotors[j]);
    if (value > best_value) {
      best_value = value;
      best = j;
    }
    worst_value = std::min(worst_value, value);
  }
  if (best_value - worst_value <= 1e-12 * std::max(1.0, best_value)) return origin;

  const double spacing = kPi / kGridPoints;
  const double centre = static_cast<double>(best) * spacing;
  const auto refined = golden_section_minimize(
      [&](double rel) { return -cost_at(k, std::polar(1.0, origin + rel)); },
      centre - spacing, centre + spacing, kRefineTolerance);
  double rel = -refined.value > best_value ? refined.x : centre;
  rel = std::fmod(rel, kPi);
  if (rel < 0.0) rel += kPi;
  return origin + rel;
}

double nonadaptive_phi(std::uint64_t m, double Phi0, double N) {
  const double stride = N > 1.0 ? kPi / std::sqrt(N) : kPi / 2.0;
  return Phi0 + static_cast<double>(m) * stride;
}

MziTracker::MziTracker(const SimParams& params, std::uint64_t trajectory_index,
                       double offset)
    : params_(params),
      noise_(params.seed, trajectory_index),
      posterior_(params.kappa()),
      phi_(offset),
      offset_(offset) {
  validate(params);
  ramp_origin_ = offset + kTwoPi * noise_.uniform();
}

Detection MziTracker::step() {
  ++m_;
  const double dt = noise_.exponential();
  time_ += dt;
  phi_ = step_phase(phi_, params_.kappa(), dt, noise_.normal());
  posterior_.diffuse(dt);

  const double Phi = params_.mode == Mode::adaptive
                         ? adaptive_phi(posterior_, offset_)
                         : nonadaptive_phi(m_, ramp_origin_, params_.N);
  const int u = noise_.uniform() < detection_probability(phi_, Phi, 1) ? 1 : 0;
  posterior_.update(Phi, u);
  return {m_, time_, phi_, Phi, u};
}

DetectionPlan detection_plan(const SimParams& params) {
  const SamplingPlan plan = schedule(SamplingRegime::mzi, params.N);
  DetectionPlan out;
  out.burn_in = params.burn_in > 0.0 ? static_cast<std::uint64_t>(std::ceil(params.burn_in))
                                     : static_cast<std::uint64_t>(plan.burn_in);
  out.horizon = params.horizon > 0.0 ? static_cast<std::uint64_t>(std::llround(params.horizon))
                                     : static_cast<std::uint64_t>(plan.horizon);
  if (out.horizon <= out.burn_in) {
    throw ValidationError("interferometer: horizon must exceed the burn-in of " +
                          std::to_string(out.burn_in) + " detections");
  }
  return out;
}

MziTrajectoryResult run_mzi_trajectory(const SimParams& params,
                                       std::uint64_t trajectory_index, double offset) {
  const DetectionPlan plan = detection_plan(params);
  MziTracker tracker(params, trajectory_index, offset);
  MziTrajectoryResult out;
  for (std::uint64_t m = 1; m <= plan.horizon; ++m) {
    const Detection d = tracker.step();
    out.max_coefficients = std::max(out.max_coefficients, tracker.posterior().size());
    ++out.detections;
    if (m <= plan.burn_in) continue;
    if (const auto theta = phase_estimate(tracker.posterior())) {
      out.errors.add(wrap_to_pi(*theta - d.phi));
    } else {
      out.errors.add(kPi);
      ++out.errors.degenerate;
    }
  }
  return out;
}

MziRecord record_mzi(const SimParams& params, std::uint64_t trajectory_index,
                     std::uint64_t detections, double offset) {
  MziTracker tracker(params, trajectory_index, offset);
  MziRecord record;
  record.detections.reserve(detections);
  for (std::uint64_t m = 0; m < detections; ++m) record.detections.push_back(tracker.step());
  return record;
}

}  // namespace phasetrack::mzi
