#include "phasetrack/theory.hpp"

#include <cmath>
#include <limits>
#include <string>

namespace phasetrack::theory {

namespace {

void require_positive(double N, double X, const char* what) {
  if (!(N > 0.0) || !(X > 0.0)) {
    throw ValidationError(std::string(what) + ": N and X must be positive");
  }
}

}  // namespace

double adaptive_coherent_variance(double N, double X) {
  require_positive(N, X, "adaptive_coherent_variance");
  return X / 8.0 + 1.0 / (2.0 * N * X);
}

double heterodyne_coherent_variance(double N, double X) {
  require_positive(N, X, "heterodyne_coherent_variance");
  return X / 4.0 + 1.0 / (2.0 * N * X);
}

double adaptive_squeezed_variance(double N, double X, double r) {
  require_positive(N, X, "adaptive_squeezed_variance");
  if (!(r >= 0.0)) throw ValidationError("adaptive_squeezed_variance: r must be >= 0");
  const double denom = 1.0 - X * std::exp(2.0 * r) / 8.0;
  if (!(denom > 0.0)) {
    throw ValidationError("adaptive_squeezed_variance: X e^{2r}/8 = " +
                          std::to_string(1.0 - denom) +
                          " >= 1, the fixed point is unstable");
  }
  return (X * std::exp(-2.0 * r) / 8.0 + 1.0 / (2.0 * N * X)) / denom;
}

double heterodyne_squeezing_factor(double r) {
  return std::cosh(2.0 * r) - 0.5 * std::sinh(2.0 * r);
}

double heterodyne_squeezed_variance(double N, double X, double r) {
  require_positive(N, X, "heterodyne_squeezed_variance");
  if (!(r >= 0.0)) throw ValidationError("heterodyne_squeezed_variance: r must be >= 0");
  return 1.0 / (2.0 * N * X) + X * heterodyne_squeezing_factor(r) / 4.0;
}

TheoryPrediction optimal_parameters(Regime regime, double N) {
  if (!(N > 0.0)) throw ValidationError("optimal_parameters: N must be positive");
  TheoryPrediction p;
  p.regime = regime;
  const double root_n = std::sqrt(N);
  switch (regime) {
    case Regime::adaptive_coherent:
      p.optimal_X = 2.0 / root_n;
      p.variance = 0.5 / root_n;
      return p;
    case Regime::heterodyne_coherent:
      p.optimal_X = std::sqrt(2.0 / N);
      p.variance = 1.0 / std::sqrt(2.0 * N);
      return p;
    case Regime::adaptive_squeezed:
      p.optimal_X = std::cbrt(4.0 / N);
      // e^{-2r} = (2N)^{-1/3}
      p.optimal_r = std::log(2.0 * N) / 6.0;
      p.variance = std::pow(2.0 * N, -2.0 / 3.0);
      return p;
    case Regime::heterodyne_squeezed:
      p.optimal_X = 2.0 / (root_n * std::pow(3.0, 0.25));
      p.optimal_r = std::log(3.0) / 4.0;
      p.variance = std::pow(3.0, 0.25) / (2.0 * root_n);
      return p;
    case Regime::mzi:
      p.optimal_X = std::numeric_limits<double>::quiet_NaN();
      p.variance = 1.0 / root_n;
      return p;
  }
  throw ValidationError("optimal_parameters: unknown regime");
}

double predicted_variance(Regime regime, double N, double X, double r) {
  switch (regime) {
    case Regime::adaptive_coherent: return adaptive_coherent_variance(N, X);
    case Regime::heterodyne_coherent: return heterodyne_coherent_variance(N, X);
    case Regime::adaptive_squeezed: return adaptive_squeezed_variance(N, X, r);
    case Regime::heterodyne_squeezed: return heterodyne_squeezed_variance(N, X, r);
    case Regime::mzi:
      if (!(N > 0.0)) throw ValidationError("predicted_variance: N must be positive");
      return 1.0 / std::sqrt(N);
  }
  throw ValidationError("predicted_variance: unknown regime");
}

}  // namespace phasetrack::theory
