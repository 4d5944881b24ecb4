#include "phasetrack/params.hpp"

#include <cmath>

namespace phasetrack {

std::string_view to_string(Mode mode) {
  return mode == Mode::adaptive ? "adaptive" : "nonadaptive";
}

std::string_view to_string(Regime regime) {
  switch (regime) {
    case Regime::adaptive_coherent: return "adaptive-coherent";
    case Regime::heterodyne_coherent: return "heterodyne-coherent";
    case Regime::adaptive_squeezed: return "adaptive-squeezed";
    case Regime::heterodyne_squeezed: return "heterodyne-squeezed";
    case Regime::mzi: return "mzi";
  }
  return "unknown";
}

Mode parse_mode(std::string_view text) {
  if (text == "adaptive") return Mode::adaptive;
  if (text == "nonadaptive" || text == "heterodyne") return Mode::nonadaptive;
  throw ValidationError("unknown mode '" + std::string(text) + "'");
}

Regime parse_regime(std::string_view text) {
  for (auto regime : {Regime::adaptive_coherent, Regime::heterodyne_coherent,
                      Regime::adaptive_squeezed, Regime::heterodyne_squeezed,
                      Regime::mzi}) {
    if (text == to_string(regime)) return regime;
  }
  throw ValidationError("unknown regime '" + std::string(text) + "'");
}

bool is_dyne(Regime regime) { return regime != Regime::mzi; }

bool is_squeezed(Regime regime) {
  return regime == Regime::adaptive_squeezed ||
         regime == Regime::heterodyne_squeezed;
}

void validate(const SimParams& p) {
  if (!(p.N > 0.0) || !std::isfinite(p.N)) {
    throw ValidationError("N must be positive and finite");
  }
  if (!(p.X > 0.0) || !std::isfinite(p.X)) {
    throw ValidationError("X must be positive and finite");
  }
  if (!(p.r >= 0.0) || !std::isfinite(p.r)) {
    throw ValidationError("r must be non-negative");
  }
  if (!(p.epsilon >= 0.0 && p.epsilon <= 1.0)) {
    throw ValidationError("epsilon must lie in [0, 1]");
  }
  if (p.trajectories < 1) {
    throw ValidationError("at least one trajectory is required");
  }
  if (p.burn_in > 0.0 && p.horizon > 0.0 && p.horizon < p.burn_in) {
    throw ValidationError("horizon precedes burn-in");
  }
}

Regime dyne_regime(const SimParams& p) {
  const bool squeezed = p.r > 0.0;
  if (p.mode == Mode::adaptive) {
    return squeezed ? Regime::adaptive_squeezed : Regime::adaptive_coherent;
  }
  return squeezed ? Regime::heterodyne_squeezed : Regime::heterodyne_coherent;
}

}  // namespace phasetrack
