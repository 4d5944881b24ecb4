#include "phasetrack/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <ostream>
#include <string>
#include <tuple>

#include <json.hpp>

#include "phasetrack/golden.hpp"
#include "phasetrack/theory.hpp"

namespace phasetrack {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::string mode_label(Regime regime, Mode mzi_mode) {
  switch (regime) {
    case Regime::adaptive_coherent:
    case Regime::adaptive_squeezed:
      return "adaptive";
    case Regime::heterodyne_coherent:
    case Regime::heterodyne_squeezed:
      return "heterodyne";
    case Regime::mzi:
      return std::string(to_string(mzi_mode));
  }
  return "unknown";
}

bool uses_epsilon(Regime regime) {
  return regime == Regime::adaptive_coherent || regime == Regime::adaptive_squeezed;
}

double theory_or_nan(Regime regime, double N, double X, double r) {
  try {
    return theory::predicted_variance(regime, N, X, r);
  } catch (const ValidationError&) {
    return kNaN;
  }
}

std::string format_number(double value) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.9g", value);
  return buf;
}

// NaN first, then ascending.
double sort_key(double v) { return std::isnan(v) ? -std::numeric_limits<double>::infinity() : v; }

nlohmann::json number_or_null(double v) {
  return std::isfinite(v) ? nlohmann::json(v) : nlohmann::json(nullptr);
}

double number_from(const nlohmann::json& j) {
  return j.is_null() ? kNaN : j.get<double>();
}

}  // namespace

std::uint64_t default_trajectories(Regime regime) {
  return regime == Regime::mzi ? schedule(SamplingRegime::mzi).repetitions : 1024;
}

double default_r(Regime regime, double N) {
  return is_squeezed(regime) ? theory::optimal_parameters(regime, N).optimal_r : 0.0;
}

double default_epsilon(Regime regime, double N) {
  if (regime == Regime::adaptive_coherent) return 1.0;
  if (regime == Regime::adaptive_squeezed) return std::min(1.0, 1.5 * std::pow(N, -0.35));
  return kNaN;
}

SimParams make_params(Regime regime, Mode mzi_mode, double N, double X, double r,
                      double epsilon, std::uint64_t trajectories, std::uint64_t seed) {
  SimParams p;
  p.N = N;
  p.trajectories = trajectories;
  p.seed = seed;
  if (regime == Regime::mzi) {
    p.mode = mzi_mode;
    return p;
  }
  if (!is_squeezed(regime) && r != 0.0) {
    throw ValidationError(std::string(to_string(regime)) + " requires r = 0");
  }
  p.X = X;
  p.r = r;
  p.mode = (regime == Regime::adaptive_coherent || regime == Regime::adaptive_squeezed)
               ? Mode::adaptive
               : Mode::nonadaptive;
  p.epsilon = uses_epsilon(regime) ? epsilon : 1.0;
  return p;
}

SweepRow run_point(Regime regime, const SimParams& params, const EnsembleOptions& execution,
                   bool* partial) {
  const EnsembleResult result =
      is_dyne(regime) ? run_dyne_ensemble(params, execution) : run_mzi_ensemble(params, execution);
  if (partial) *partial = result.partial;

  SweepRow row;
  row.regime = std::string(to_string(regime));
  row.N = params.N;
  row.X = is_dyne(regime) ? params.X : kNaN;
  row.r = params.r;
  row.epsilon = uses_epsilon(regime) ? params.epsilon : kNaN;
  row.mode = mode_label(regime, params.mode);
  const VarianceEstimate holevo = result.holevo();
  const VarianceEstimate standard = result.standard();
  row.holevo_var = holevo.value;
  row.holevo_se = holevo.standard_error;
  row.std_var = standard.value;
  row.std_se = standard.standard_error;
  row.theory_var = theory_or_nan(regime, params.N, params.X, params.r);
  row.ratio = row.holevo_var / row.theory_var;
  row.samples = result.pooled().count;
  row.wall_s = result.wall_seconds;
  return row;
}

SweepResult run_sweep(const SweepConfig& config) {
  if (config.n_values.empty()) throw ValidationError("sweep: the N grid is empty");
  if (is_dyne(config.regime) && config.x_values.empty() && config.x_factors.empty()) {
    throw ValidationError("sweep: the X grid is empty");
  }
  for (double n : config.n_values) {
    if (!(n > 0.0)) throw ValidationError("sweep: N values must be positive");
  }
  const std::uint64_t trajectories =
      config.trajectories ? config.trajectories : default_trajectories(config.regime);

  SweepResult out;
  for (double N : config.n_values) {
    std::vector<double> xs{kNaN};
    std::vector<double> rs{0.0};
    std::vector<double> eps{kNaN};
    if (is_dyne(config.regime)) {
      xs = config.x_values;
      if (xs.empty()) {
        const double x_opt = theory::optimal_parameters(config.regime, N).optimal_X;
        for (double f : config.x_factors) xs.push_back(f * x_opt);
      }
      rs = config.r_values.empty() ? std::vector<double>{default_r(config.regime, N)}
                                   : config.r_values;
      eps = config.epsilon_values.empty()
                ? std::vector<double>{default_epsilon(config.regime, N)}
                : config.epsilon_values;
    }
    for (double X : xs) {
      for (double r : rs) {
        for (double e : eps) {
          SimParams p = make_params(config.regime, config.mzi_mode, N, X, r, e, trajectories,
                                    config.seed);
          p.burn_in = config.burn_in;
          p.horizon = config.horizon;
          bool partial = false;
          out.rows.push_back(run_point(config.regime, p, config.execution, &partial));
          out.partial = out.partial || partial;
        }
      }
    }
  }
  sort_rows(out.rows);
  return out;
}

OptimumResult find_optimum(Regime regime, double N, const OptimumControls& controls) {
  if (regime == Regime::mzi) {
    throw ValidationError("optimum: the interferometer has no tunable parameters");
  }
  if (!(N > 0.0)) throw ValidationError("optimum: N must be positive");
  const auto prediction = theory::optimal_parameters(regime, N);

  // Coordinates are searched in log space: log X, log e^{-2r}, log epsilon.
  struct Coordinate {
    double value;
    double lo;
    double hi;
  };
  std::vector<Coordinate> coords;
  const double log_x = std::log(prediction.optimal_X);
  coords.push_back({log_x, log_x - std::log(8.0), log_x + std::log(4.0)});
  if (is_squeezed(regime)) {
    const double log_s = -2.0 * prediction.optimal_r;
    coords.push_back({log_s, log_s - std::log(4.0), std::min(0.0, log_s + std::log(16.0))});
  }
  if (regime == Regime::adaptive_squeezed) {
    const double log_e = std::log(default_epsilon(regime, N));
    coords.push_back({log_e, log_e - std::log(8.0), 0.0});
  }

  auto to_params = [&](const std::vector<Coordinate>& c, std::uint64_t trajectories) {
    const double X = std::exp(c[0].value);
    const double r = c.size() > 1 ? std::max(0.0, -c[1].value / 2.0) : 0.0;
    const double e = c.size() > 2 ? std::min(1.0, std::exp(c[2].value))
                                  : default_epsilon(regime, N);
    SimParams p = make_params(regime, Mode::adaptive, N, X, r, e, trajectories, controls.seed);
    p.burn_in = controls.burn_in;
    p.horizon = controls.horizon;
    return p;
  };

  OptimumResult out;
  out.regime = regime;
  out.N = N;
  out.theory_variance = prediction.variance;

  const auto started = std::chrono::steady_clock::now();
  auto out_of_time = [&] {
    const std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - started;
    if (elapsed.count() > controls.budget_seconds) out.budget_exhausted = true;
    return out.budget_exhausted;
  };

  auto objective = [&](const std::vector<Coordinate>& c) {
    if (out.evaluations > 0 && out_of_time()) return std::numeric_limits<double>::max();
    ++out.evaluations;
    const EnsembleResult run =
        run_dyne_ensemble(to_params(c, controls.search_trajectories), controls.execution);
    const double v = run.holevo().value;
    return std::isfinite(v) ? v : std::numeric_limits<double>::max();
  };

  double best = objective(coords);
  for (std::size_t cycle = 0; cycle < controls.max_cycles; ++cycle) {
    const double before = best;
    for (std::size_t i = 0; i < coords.size(); ++i) {
      auto trial = coords;
      const auto found = golden_section_minimize(
          [&](double v) {
            trial[i].value = v;
            return objective(trial);
          },
          coords[i].lo, coords[i].hi, 1e-3, controls.evaluations_per_coordinate);
      if (found.value < best) {
        best = found.value;
        coords[i].value = found.x;
      }
    }
    if (out.budget_exhausted) break;
    if ((before - best) / before < controls.improvement_tolerance) {
      out.converged = true;
      break;
    }
  }
  out.search_variance = best;

  const SimParams final_params = to_params(coords, controls.final_trajectories);
  out.X = final_params.X;
  out.r = final_params.r;
  out.epsilon = uses_epsilon(regime) ? final_params.epsilon : kNaN;
  out.row = run_point(regime, final_params, controls.execution, &out.partial);
  out.variance = {out.row.holevo_var, out.row.holevo_se};
  return out;
}

OutputFormat parse_format(std::string_view text) {
  if (text == "csv") return OutputFormat::csv;
  if (text == "json") return OutputFormat::json;
  throw ValidationError("unknown output format '" + std::string(text) + "'");
}

std::vector<double> parse_n_grid(std::string_view text) {
  auto number = [&](std::string_view part) {
    const std::string token(part);
    std::size_t used = 0;
    double value = 0.0;
    try {
      value = std::stod(token, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != token.size() || token.empty()) {
      throw ValidationError("invalid N specification '" + std::string(text) + "'");
    }
    return value;
  };
  const auto first = text.find(':');
  if (first == std::string_view::npos) return {number(text)};
  const auto second = text.find(':', first + 1);
  if (second == std::string_view::npos) {
    throw ValidationError("N range must look like a:b:steps, got '" + std::string(text) + "'");
  }
  const double lo = number(text.substr(0, first));
  const double hi = number(text.substr(first + 1, second - first - 1));
  const double steps = number(text.substr(second + 1));
  if (!(lo > 0.0) || !(hi >= lo) || steps < 1.0 || steps != std::floor(steps)) {
    throw ValidationError("invalid N range '" + std::string(text) + "'");
  }
  const auto count = static_cast<std::size_t>(steps);
  if (count == 1) return {lo};
  std::vector<double> grid;
  const double ratio = std::log(hi / lo) / static_cast<double>(count - 1);
  for (std::size_t i = 0; i < count; ++i) {
    grid.push_back(i + 1 == count ? hi : lo * std::exp(ratio * static_cast<double>(i)));
  }
  return grid;
}

void sort_rows(std::vector<SweepRow>& rows) {
  std::stable_sort(rows.begin(), rows.end(), [](const SweepRow& a, const SweepRow& b) {
    return std::make_tuple(sort_key(a.N), sort_key(a.X), sort_key(a.r), sort_key(a.epsilon)) <
           std::make_tuple(sort_key(b.N), sort_key(b.X), sort_key(b.r), sort_key(b.epsilon));
  });
}

void write_results(const std::vector<SweepRow>& rows, std::ostream& out, OutputFormat format) {
  if (rows.empty()) throw ValidationError("emit_results: no rows to write");
  if (format == OutputFormat::csv) {
    out << kCsvHeader << '\n';
    for (const auto& r : rows) {
      out << r.regime << ',' << format_number(r.N) << ',' << format_number(r.X) << ','
          << format_number(r.r) << ',' << format_number(r.epsilon) << ',' << r.mode << ','
          << format_number(r.holevo_var) << ',' << format_number(r.holevo_se) << ','
          << format_number(r.std_var) << ',' << format_number(r.std_se) << ','
          << format_number(r.theory_var) << ',' << format_number(r.ratio) << ','
          << r.samples << ',' << format_number(r.wall_s) << '\n';
    }
    return;
  }
  nlohmann::json array = nlohmann::json::array();
  for (const auto& r : rows) {
    array.push_back({
        {"regime", r.regime},
        {"N", number_or_null(r.N)},
        {"X", number_or_null(r.X)},
        {"r", number_or_null(r.r)},
        {"epsilon", number_or_null(r.epsilon)},
        {"mode", r.mode},
        {"holevo_var", number_or_null(r.holevo_var)},
        {"holevo_se", number_or_null(r.holevo_se)},
        {"std_var", number_or_null(r.std_var)},
        {"std_se", number_or_null(r.std_se)},
        {"theory_var", number_or_null(r.theory_var)},
        {"ratio", number_or_null(r.ratio)},
        {"samples", r.samples},
        {"wall_s", number_or_null(r.wall_s)},
    });
  }
  out << array.dump(2) << '\n';
}

void emit_results(const std::vector<SweepRow>& rows, const std::string& path,
                  OutputFormat format) {
  std::ofstream file(path, std::ios::binary | std::ios::trunc);
  if (!file) throw IoError("cannot open '" + path + "' for writing");
  write_results(rows, file, format);
  file.flush();
  if (!file) throw IoError("failed while writing '" + path + "'");
}

std::vector<SweepRow> parse_results_json(std::string_view text) {
  const auto array = nlohmann::json::parse(text);
  std::vector<SweepRow> rows;
  for (const auto& j : array) {
    SweepRow r;
    r.regime = j.at("regime").get<std::string>();
    r.N = number_from(j.at("N"));
    r.X = number_from(j.at("X"));
    r.r = number_from(j.at("r"));
    r.epsilon = number_from(j.at("epsilon"));
    r.mode = j.at("mode").get<std::string>();
    r.holevo_var = number_from(j.at("holevo_var"));
    r.holevo_se = number_from(j.at("holevo_se"));
    r.std_var = number_from(j.at("std_var"));
    r.std_se = number_from(j.at("std_se"));
    r.theory_var = number_from(j.at("theory_var"));
    r.ratio = number_from(j.at("ratio"));
    r.samples = j.at("samples").get<std::uint64_t>();
    r.wall_s = number_from(j.at("wall_s"));
    rows.push_back(std::move(r));
  }
  return rows;
}

}  // namespace phasetrack
