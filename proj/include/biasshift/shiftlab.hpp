#pragma once

// Synthetic translation-shift experiments.
//
// A scenario is a Gaussian mixture density f, a decision threshold t and a
// translation delta. Moving f by +delta changes the positive mass at t by
// exactly the mass f puts on [t - delta, t], so the bias shift caused by a
// pure translation is governed by the density around the boundary. The
// functions here compute that mass in closed form, estimate it by sampling,
// and compare the two.

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "biasshift/gaussian.hpp"
#include "biasshift/kernels.hpp"

namespace biasshift {

struct ShiftScenario {
  std::vector<GaussianComponent> components;
  double delta = 0.0;
  double threshold = 0.0;
  std::string label;

  // Throws InputError unless weights are >= 0 and sum to 1 within 1e-12 and
  // every stddev is positive and finite.
  void validate() const;
};

double mixture_pdf(const ShiftScenario& scenario, double x);
double mixture_cdf(const ShiftScenario& scenario, double x);
// Mass of the mixture on [a, b], a <= b, without cancellation in the tails.
double mixture_mass(const ShiftScenario& scenario, double a, double b);

// |F(t) - F(t - delta)|.
double analytic_shift(const ShiftScenario& scenario);

struct ScenarioDraw {
  std::vector<double> base;
  std::vector<double> shifted;  // independent draw from f, plus delta
};

// Streams are keyed by (seed, label), so scenarios sample independently of
// evaluation order.
ScenarioDraw sample_scenario(const ShiftScenario& scenario, std::size_t n, std::uint64_t seed,
                             Execution exec = Execution::parallel);

struct EmpiricalShift {
  double p_base = 0.0;
  double p_shifted = 0.0;
  double shift = 0.0;
};

EmpiricalShift empirical_shift_detail(const ShiftScenario& scenario, std::size_t n,
                                      std::uint64_t seed);
double empirical_shift(const ShiftScenario& scenario, std::size_t n, std::uint64_t seed);

// 3 * sqrt(2 p (1 - p) / n): three standard deviations of the difference of
// two independent proportions.
double sampling_tolerance(double p, std::size_t n);

struct SimulationRow {
  std::string label;
  double delta = 0.0;
  double threshold = 0.0;
  double boundary_density = 0.0;  // f(t)
  double analytic_shift = 0.0;
  double empirical_shift = 0.0;
  double emd = 0.0;  // between the base and shifted draws
  double p_base = 0.0;
  double tolerance = 0.0;

  friend bool operator==(const SimulationRow&, const SimulationRow&) = default;
};

SimulationRow simulate(const ShiftScenario& scenario, std::size_t n, std::uint64_t seed);

// The four reference scenarios: a bimodal and a unimodal density with the
// boundary at t = 0 in a dense region, and the same pair with the boundary
// in a sparse region. All use delta = 0.3.
std::vector<ShiftScenario> fig1_scenarios();

struct Fig1Result {
  std::vector<SimulationRow> rows;
  double min_high_analytic = 0.0;
  double max_low_analytic = 0.0;
  double min_high_empirical = 0.0;
  double max_low_empirical = 0.0;
  bool shift_contrast_holds = false;  // high >= 10x low, analytic and empirical
  bool emd_matches_delta = false;     // every emd within 10% of |delta|
};

// fig1_scenarios() plus scenarios covering a plain unimodal shift, a null
// shift, a negative shift, an asymmetric mixture and a non-zero threshold.
std::vector<ShiftScenario> translation_suite_scenarios();

// Built-in scenario sets by name: "fig1", "translation-suite". Throws
// InputError for an unknown name.
std::vector<ShiftScenario> builtin_scenarios(std::string_view name);

// Rows are classed high/low by whether f(t) exceeds the default
// categorization threshold.
Fig1Result fig1_experiment(std::size_t n, std::uint64_t seed);

// Scenario file: `key = value` lines for label, delta and threshold, and bare
// `weight,mean,stddev` lines for components. `#` starts a comment; a line
// holding only `---` separates scenarios.
std::vector<ShiftScenario> parse_scenarios(std::istream& in, std::string_view source = "<stream>");
std::vector<ShiftScenario> load_scenarios(const std::filesystem::path& path);

// label,delta,threshold,boundary_density,analytic_shift,empirical_shift,emd,p_base,tolerance
void write_simulation_csv(std::span<const SimulationRow> rows, std::ostream& out);

}  // namespace biasshift
