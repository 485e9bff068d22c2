#include "biasshift/shiftlab.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <stdexcept>

#include "biasshift/error.hpp"
#include "biasshift/format.hpp"
#include "biasshift/metrics.hpp"
#include "biasshift/rng.hpp"
#include "biasshift/stats.hpp"
#include "csv_util.hpp"

namespace biasshift {

void ShiftScenario::validate() const {
  const std::string name = label.empty() ? std::string("<unnamed>") : label;
  if (components.empty()) throw InputError("scenario " + name + ": no mixture components");
  double total = 0.0;
  for (const auto& c : components) {
    if (!(c.weight >= 0.0) || !std::isfinite(c.weight)) {
      throw InputError("scenario " + name + ": component weight must be non-negative");
    }
    if (!(c.stddev > 0.0) || !std::isfinite(c.stddev)) {
      throw InputError("scenario " + name + ": component stddev must be positive");
    }
    if (!std::isfinite(c.mean)) throw InputError("scenario " + name + ": non-finite mean");
    total += c.weight;
  }
  if (std::fabs(total - 1.0) > 1e-12) {
    throw InputError("scenario " + name + ": weights sum to " + format_double(total) +
                     ", expected 1");
  }
  if (!std::isfinite(delta) || !std::isfinite(threshold)) {
    throw InputError("scenario " + name + ": delta and threshold must be finite");
  }
}

double mixture_pdf(const ShiftScenario& scenario, double x) {
  double sum = 0.0;
  for (const auto& c : scenario.components) sum += c.weight * normal_pdf(x, c.mean, c.stddev);
  return sum;
}

double mixture_cdf(const ShiftScenario& scenario, double x) {
  double sum = 0.0;
  for (const auto& c : scenario.components) sum += c.weight * normal_cdf(x, c.mean, c.stddev);
  return sum;
}

double mixture_mass(const ShiftScenario& scenario, double a, double b) {
  if (a > b) throw std::invalid_argument("mixture_mass needs a <= b");
  double sum = 0.0;
  for (const auto& c : scenario.components) {
    sum += c.weight * standard_normal_mass((a - c.mean) / c.stddev, (b - c.mean) / c.stddev);
  }
  return sum;
}

double analytic_shift(const ShiftScenario& scenario) {
  scenario.validate();
  const double t = scenario.threshold;
  const double lo = std::min(t - scenario.delta, t);
  const double hi = std::max(t - scenario.delta, t);
  return mixture_mass(scenario, lo, hi);
}

ScenarioDraw sample_scenario(const ShiftScenario& scenario, std::size_t n, std::uint64_t seed,
                             Execution exec) {
  scenario.validate();
  if (n == 0) throw std::invalid_argument("sample_scenario needs n >= 1");
  const std::uint64_t label_key = rng::hash_label(scenario.label);
  const std::uint64_t base_key = rng::derive_key(seed, {rng::kTagScenario, label_key, 0});
  const std::uint64_t shifted_key = rng::derive_key(seed, {rng::kTagScenario, label_key, 1});

  ScenarioDraw draw;
  draw.base.resize(n);
  draw.shifted.resize(n);
  if (exec == Execution::serial) {
    kernels::serial::draw_mixture(scenario.components, base_key, 0.0, draw.base);
    kernels::serial::draw_mixture(scenario.components, shifted_key, scenario.delta, draw.shifted);
  } else {
    kernels::parallel::draw_mixture(scenario.components, base_key, 0.0, draw.base);
    kernels::parallel::draw_mixture(scenario.components, shifted_key, scenario.delta,
                                    draw.shifted);
  }
  return draw;
}

namespace {

EmpiricalShift empirical_from_draw(const ShiftScenario& scenario, const ScenarioDraw& draw) {
  EmpiricalShift e;
  e.p_base = positive_proportion(draw.base, scenario.threshold);
  e.p_shifted = positive_proportion(draw.shifted, scenario.threshold);
  e.shift = bias_shift(e.p_shifted, e.p_base);
  return e;
}

}  // namespace

EmpiricalShift empirical_shift_detail(const ShiftScenario& scenario, std::size_t n,
                                      std::uint64_t seed) {
  return empirical_from_draw(scenario, sample_scenario(scenario, n, seed));
}

double empirical_shift(const ShiftScenario& scenario, std::size_t n, std::uint64_t seed) {
  return empirical_shift_detail(scenario, n, seed).shift;
}

double sampling_tolerance(double p, std::size_t n) {
  return 3.0 * std::sqrt(p * (1.0 - p) * 2.0 / static_cast<double>(n));
}

SimulationRow simulate(const ShiftScenario& scenario, std::size_t n, std::uint64_t seed) {
  const auto draw = sample_scenario(scenario, n, seed);
  const auto e = empirical_from_draw(scenario, draw);
  SimulationRow row;
  row.label = scenario.label;
  row.delta = scenario.delta;
  row.threshold = scenario.threshold;
  row.boundary_density = mixture_pdf(scenario, scenario.threshold);
  row.analytic_shift = analytic_shift(scenario);
  row.empirical_shift = e.shift;
  row.emd = emd_1d(draw.base, draw.shifted);
  row.p_base = e.p_base;
  row.tolerance = sampling_tolerance(e.p_base, n);
  return row;
}

std::vector<ShiftScenario> fig1_scenarios() {
  constexpr double kDelta = 0.3;
  return {
      {{{0.5, -1.0, 0.8}, {0.5, 1.0, 0.8}}, kDelta, 0.0, "bimodal-high"},
      {{{1.0, 0.3, 1.0}}, kDelta, 0.0, "unimodal-high"},
      {{{0.5, -3.0, 0.5}, {0.5, 3.0, 0.5}}, kDelta, 0.0, "bimodal-low"},
      {{{1.0, 3.0, 1.0}}, kDelta, 0.0, "unimodal-low"},
  };
}

std::vector<ShiftScenario> translation_suite_scenarios() {
  auto scenarios = fig1_scenarios();
  scenarios.push_back({{{1.0, 0.0, 1.0}}, 0.5, 0.0, "standard-normal"});
  scenarios.push_back({{{1.0, 0.5, 1.0}}, 0.0, 0.0, "null-shift"});
  scenarios.push_back({{{1.0, 0.0, 1.0}}, -0.4, 0.0, "negative-shift"});
  scenarios.push_back({{{0.7, -1.5, 0.6}, {0.3, 2.0, 1.2}}, 0.25, 0.0, "asymmetric-mixture"});
  scenarios.push_back({{{0.5, -2.0, 1.0}, {0.5, 2.0, 1.0}}, 0.2, 1.5, "offset-threshold"});
  return scenarios;
}

std::vector<ShiftScenario> builtin_scenarios(std::string_view name) {
  if (name == "fig1") return fig1_scenarios();
  if (name == "translation-suite") return translation_suite_scenarios();
  throw InputError("unknown builtin scenario set '" + std::string(name) +
                   "' (expected fig1 or translation-suite)");
}

Fig1Result fig1_experiment(std::size_t n, std::uint64_t seed) {
  if (n < 10000) throw std::invalid_argument("fig1 experiment needs n >= 10^4");
  Fig1Result result;
  result.min_high_analytic = result.min_high_empirical = INFINITY;
  result.max_low_analytic = result.max_low_empirical = 0.0;
  result.emd_matches_delta = true;
  for (const auto& scenario : fig1_scenarios()) {
    auto row = simulate(scenario, n, seed);
    if (categorize(row.boundary_density) == Category::spectrum) {
      result.min_high_analytic = std::min(result.min_high_analytic, row.analytic_shift);
      result.min_high_empirical = std::min(result.min_high_empirical, row.empirical_shift);
    } else {
      result.max_low_analytic = std::max(result.max_low_analytic, row.analytic_shift);
      result.max_low_empirical = std::max(result.max_low_empirical, row.empirical_shift);
    }
    const double d = std::fabs(scenario.delta);
    if (std::fabs(row.emd - d) > 0.1 * d) result.emd_matches_delta = false;
    result.rows.push_back(std::move(row));
  }
  result.shift_contrast_holds =
      result.min_high_analytic >= 10.0 * result.max_low_analytic &&
      result.min_high_empirical >= 10.0 * result.max_low_empirical;
  return result;
}

std::vector<ShiftScenario> parse_scenarios(std::istream& in, std::string_view source) {
  std::vector<ShiftScenario> scenarios;
  ShiftScenario current;
  bool has_content = false;
  std::size_t line_no = 0;
  auto fail = [&](const std::string& msg) -> InputError {
    return InputError(std::string(source) + ":" + std::to_string(line_no) + ": " + msg);
  };
  auto finish = [&] {
    if (!has_content) return;
    if (current.label.empty()) current.label = "scenario-" + std::to_string(scenarios.size() + 1);
    current.validate();
    scenarios.push_back(std::move(current));
    current = ShiftScenario{};
    has_content = false;
  };
  auto number = [&](std::string_view text, const char* what) {
    const auto v = parse_double(trim(text));
    if (!v || !std::isfinite(*v)) throw fail(std::string("invalid ") + what + " '" + std::string(text) + "'");
    return *v;
  };

  std::string raw;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string_view line = raw;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (!line.empty() && line.back() == '\r') line = trim(line.substr(0, line.size() - 1));
    if (line.empty()) continue;
    if (line == "---") {
      finish();
      continue;
    }
    has_content = true;
    if (const auto eq = line.find('='); eq != std::string_view::npos) {
      const auto key = trim(line.substr(0, eq));
      const auto value = trim(line.substr(eq + 1));
      if (key == "label") current.label = std::string(value);
      else if (key == "delta") current.delta = number(value, "delta");
      else if (key == "threshold") current.threshold = number(value, "threshold");
      else throw fail("unknown key '" + std::string(key) + "'");
      continue;
    }
    const auto fields = csv::split_record(line, {source, line_no});
    if (fields.size() != 3) throw fail("expected 'weight,mean,stddev', found '" + std::string(line) + "'");
    current.components.push_back(
        {number(fields[0], "weight"), number(fields[1], "mean"), number(fields[2], "stddev")});
  }
  finish();
  if (scenarios.empty()) throw InputError(std::string(source) + ": no scenarios defined");
  return scenarios;
}

std::vector<ShiftScenario> load_scenarios(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open scenario file '" + path.string() + "'");
  return parse_scenarios(in, path.string());
}

void write_simulation_csv(std::span<const SimulationRow> rows, std::ostream& out) {
  out << "label,delta,threshold,boundary_density,analytic_shift,empirical_shift,emd,p_base,"
         "tolerance\n";
  for (const auto& r : rows) {
    out << csv::quote_if_needed(r.label) << ',' << format_double(r.delta) << ','
        << format_double(r.threshold) << ',' << format_double(r.boundary_density) << ','
        << format_double(r.analytic_shift) << ',' << format_double(r.empirical_shift) << ','
        << format_double(r.emd) << ',' << format_double(r.p_base) << ','
        << format_double(r.tolerance) << '\n';
  }
}

}  // namespace biasshift
