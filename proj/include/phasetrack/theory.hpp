#pragma once

#include "phasetrack/params.hpp"

namespace phasetrack::theory {

/// Closed-form equilibrium variances in |alpha| = 1 units. All throw
/// ValidationError for non-positive N or X.

/// X/8 + 1/(2NX), minimised at X = 2/sqrt(N).
double adaptive_coherent_variance(double N, double X);

/// X/4 + 1/(2NX), minimised at X = sqrt(2/N).
double heterodyne_coherent_variance(double N, double X);

/// Exact fixed point of the self-consistent squeezed-beam relation
///   V = (X/8)(e^{-2r} + e^{2r} V) + 1/(2NX).
/// Throws ValidationError when X e^{2r}/8 >= 1 (no stable fixed point).
double adaptive_squeezed_variance(double N, double X, double r);

/// 1/(2NX) + X (cosh 2r - sinh(2r)/2) / 4.
double heterodyne_squeezed_variance(double N, double X, double r);

/// Squeezing multiplier cosh 2r - sinh(2r)/2 seen by heterodyne detection.
double heterodyne_squeezing_factor(double r);

/// Prediction for `regime` at its optimum.
struct TheoryPrediction {
  Regime regime = Regime::adaptive_coherent;
  double variance = 0.0;
  double optimal_X = 0.0;  ///< NaN for the interferometer (no filter)
  double optimal_r = 0.0;
};

TheoryPrediction optimal_parameters(Regime regime, double N);

/// Formula for `regime` evaluated at (N, X, r). The interferometer ignores
/// X and r and returns 1/sqrt(N).
double predicted_variance(Regime regime, double N, double X, double r);

}  // namespace phasetrack::theory
