#include "biasshift/metrics.hpp"

#include <cmath>
#include <exception>
#include <stdexcept>

#include "biasshift/error.hpp"
#include "biasshift/resample.hpp"
#include "biasshift/stats.hpp"

namespace biasshift {

namespace {

void require_proportion(double p, const char* what) {
  if (!(p >= 0.0 && p <= 1.0)) {
    throw std::invalid_argument(std::string(what) + " must lie in [0, 1]");
  }
}

std::string join(const std::vector<std::string>& names) {
  std::string out;
  for (const auto& n : names) out += (out.empty() ? "'" : ", '") + n + "'";
  return out;
}

}  // namespace

IdealReference::IdealReference(std::map<std::string, double> probabilities) {
  for (auto& [name, p] : probabilities) {
    require_proportion(p, "ideal probability");
    probabilities_.emplace(name, p);
  }
}

double IdealReference::probability(std::string_view attribute) const {
  auto it = probabilities_.find(attribute);
  if (it == probabilities_.end()) {
    throw MismatchError("no ideal probability for attribute '" + std::string(attribute) + "'");
  }
  return it->second;
}

double positive_proportion(std::span<const double> scores, double t) {
  if (scores.empty()) throw std::invalid_argument("positive proportion of empty sample");
  if (!std::isfinite(t)) throw std::invalid_argument("threshold must be finite");
  std::size_t positive = 0;
  for (double s : scores) positive += (s >= t) ? 1 : 0;
  return static_cast<double>(positive) / static_cast<double>(scores.size());
}

double bias_vs_ideal(double p_obs, double p_ideal) {
  require_proportion(p_obs, "observed proportion");
  require_proportion(p_ideal, "ideal proportion");
  return p_obs - p_ideal;
}

double bias_shift(double p_gen, double p_ref) {
  require_proportion(p_gen, "generated proportion");
  require_proportion(p_ref, "reference proportion");
  return std::fabs(p_gen - p_ref);
}

double abs_metric(std::span<const double> shifts) {
  if (shifts.empty()) throw std::invalid_argument("ABS of an empty shift list");
  double sum = 0.0;
  for (double s : shifts) {
    require_proportion(s, "bias shift");
    sum += s;
  }
  return sum / static_cast<double>(shifts.size());
}

Category categorize(double boundary_density, double threshold) {
  if (!(boundary_density >= 0.0)) {
    throw std::invalid_argument("boundary density must be non-negative");
  }
  return boundary_density > threshold ? Category::spectrum : Category::non_spectrum;
}

AbsSummary summarize(std::span<const BiasRecord> records) {
  if (records.empty()) throw std::invalid_argument("cannot summarize an empty record list");
  std::vector<double> all;
  std::vector<double> spectrum;
  std::vector<double> non_spectrum;
  for (const auto& r : records) {
    all.push_back(r.bias_shift);
    (r.category == Category::spectrum ? spectrum : non_spectrum).push_back(r.bias_shift);
  }
  AbsSummary s;
  s.overall = abs_metric(all);
  if (!spectrum.empty()) s.spectrum = abs_metric(spectrum);
  if (!non_spectrum.empty()) s.non_spectrum = abs_metric(non_spectrum);
  s.spectrum_count = spectrum.size();
  s.non_spectrum_count = non_spectrum.size();
  return s;
}

namespace {

BiasRecord analyze_attribute(std::size_t j, const ScoreTable& ref, const ScoreTable& gen,
                             const DecisionRule& rule, const AnalyzeOptions& options) {
  const std::string& name = ref.attributes()[j];
  const auto ref_col = ref.column(j);
  const auto gen_col = gen.column(*gen.find(name));

  BiasRecord r;
  r.attribute = name;
  r.threshold = rule.threshold(name);
  r.p_ref = positive_proportion(ref_col, r.threshold);
  r.p_gen = positive_proportion(gen_col, r.threshold);
  r.bias_shift = bias_shift(r.p_gen, r.p_ref);

  double h_ref = 0.0;
  try {
    h_ref = kde_bandwidth(ref_col);
  } catch (const std::invalid_argument&) {
    throw InputError("attribute '" + name + "': reference scores are constant, density undefined");
  }
  const DensityEstimate estimate(ref_col, h_ref);
  r.bandwidth_ref = h_ref;
  r.boundary_density = estimate.density_at(r.threshold);
  r.category = categorize(r.boundary_density, options.categorization_threshold);
  try {
    r.bandwidth_gen = kde_bandwidth(gen_col);
  } catch (const std::invalid_argument&) {
    r.bandwidth_gen = 0.0;  // constant generated column
  }
  r.emd = emd_1d(ref_col, gen_col);

  if (options.replicates > 0) {
    const auto ci_ref = bootstrap_proportion_ci(ref_col, r.threshold, options.replicates,
                                                options.seed, 2 * j, options.execution);
    const auto ci_gen = bootstrap_proportion_ci(gen_col, r.threshold, options.replicates,
                                                options.seed, 2 * j + 1, options.execution);
    r.ci_half_width =
        kNormal95 * std::sqrt(ci_ref.standard_error * ci_ref.standard_error +
                              ci_gen.standard_error * ci_gen.standard_error);
  }
  return r;
}

}  // namespace

Analysis analyze(const ScoreTable& ref, const ScoreTable& gen, const DecisionRule& rule,
                 const AnalyzeOptions& options) {
  std::vector<std::string> missing_in_gen;
  std::vector<std::string> extra_in_gen;
  std::vector<std::string> missing_threshold;
  for (const auto& a : ref.attributes()) {
    if (!gen.find(a)) missing_in_gen.push_back(a);
    if (!rule.covers(a)) missing_threshold.push_back(a);
  }
  for (const auto& a : gen.attributes()) {
    if (!ref.find(a)) extra_in_gen.push_back(a);
  }
  if (!missing_in_gen.empty() || !extra_in_gen.empty()) {
    std::string msg = "attribute sets differ:";
    if (!missing_in_gen.empty()) msg += " missing from generated table: " + join(missing_in_gen) + ";";
    if (!extra_in_gen.empty()) msg += " missing from reference table: " + join(extra_in_gen) + ";";
    msg.pop_back();
    throw MismatchError(msg);
  }
  if (!missing_threshold.empty()) {
    throw MismatchError("missing decision threshold for " + join(missing_threshold));
  }
  if (options.replicates == 1) throw std::invalid_argument("bootstrap needs at least 2 replicates");

  const std::size_t n = ref.cols();
  std::vector<BiasRecord> records(n);
  std::vector<std::exception_ptr> errors(n);
  if (options.execution == Execution::serial) {
    for (std::size_t j = 0; j < n; ++j) records[j] = analyze_attribute(j, ref, gen, rule, options);
  } else {
    const auto count = static_cast<std::ptrdiff_t>(n);
#pragma omp parallel for schedule(dynamic, 1)
    for (std::ptrdiff_t j = 0; j < count; ++j) {
      try {
        records[j] = analyze_attribute(static_cast<std::size_t>(j), ref, gen, rule, options);
      } catch (...) {
        errors[j] = std::current_exception();
      }
    }
    for (const auto& e : errors) {
      if (e) std::rethrow_exception(e);
    }
  }

  Analysis result;
  result.abs = summarize(records);
  result.records = std::move(records);
  return result;
}

}  // namespace biasshift
