#pragma once

#include <cmath>
#include <cstddef>

namespace phasetrack {

struct GoldenResult {
  double x = 0.0;
  double value = 0.0;
  std::size_t evaluations = 0;
};

// Golden-section search for a minimum of f on [lo, hi]. Stops when the
// bracket is narrower than `tolerance` or after `max_evaluations` calls,
// and returns the best point seen (end points are never evaluated).
template <typename F>
GoldenResult golden_section_minimize(F&& f, double lo, double hi, double tolerance,
                                     std::size_t max_evaluations = 200) {
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = hi - inv_phi * (hi - lo);
  double d = lo + inv_phi * (hi - lo);
  double fc = f(c);
  double fd = f(d);
  GoldenResult best{fc <= fd ? c : d, fc <= fd ? fc : fd, 2};

  while (hi - lo > tolerance && best.evaluations < max_evaluations) {
    if (fc <= fd) {
      hi = d;
      d = c;
      fd = fc;
      c = hi - inv_phi * (hi - lo);
      fc = f(c);
      if (fc < best.value) best = {c, fc, best.evaluations};
    } else {
      lo = c;
      c = d;
      fc = fd;
      d = lo + inv_phi * (hi - lo);
      fd = f(d);
      if (fd < best.value) best = {d, fd, best.evaluations};
    }
    ++best.evaluations;
  }
  return best;
}

}  // namespace phasetrack
