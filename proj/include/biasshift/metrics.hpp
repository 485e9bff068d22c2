#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "biasshift/kernels.hpp"
#include "biasshift/records.hpp"
#include "biasshift/score_table.hpp"

namespace biasshift {

// Boundary density (per logit unit) above which an attribute counts as
// spectrum-based.
inline constexpr double kDefaultCategorizationThreshold = 0.01;

// Target attribute proportions of an externally chosen ideal distribution.
class IdealReference {
 public:
  explicit IdealReference(std::map<std::string, double> probabilities);
  double probability(std::string_view attribute) const;

 private:
  std::map<std::string, double, std::less<>> probabilities_;
};

// Fraction of scores >= t.
double positive_proportion(std::span<const double> scores, double t);

// p_obs - p_ideal, signed.
double bias_vs_ideal(double p_obs, double p_ideal);

// |p_gen - p_ref|. Independent of any ideal reference, since
// (p_gen - i) - (p_ref - i) = p_gen - p_ref.
double bias_shift(double p_gen, double p_ref);

// Unweighted mean of per-attribute shifts.
double abs_metric(std::span<const double> shifts);

// spectrum iff boundary_density > threshold (strict).
Category categorize(double boundary_density,
                    double threshold = kDefaultCategorizationThreshold);

// Overall and per-category ABS of a record set.
AbsSummary summarize(std::span<const BiasRecord> records);

struct AnalyzeOptions {
  double categorization_threshold = kDefaultCategorizationThreshold;
  // Bootstrap replicates for ci_half_width; 0 leaves it empty.
  std::size_t replicates = 0;
  std::uint64_t seed = 0;
  Execution execution = Execution::parallel;
};

struct Analysis {
  std::vector<BiasRecord> records;
  AbsSummary abs;
};

// One BiasRecord per attribute of `ref`, in ref's column order. `gen` must
// carry the same attribute set (any column order) and `rule` a threshold for
// each. The boundary density is the reference-split KDE at the threshold.
// Throws MismatchError naming the offending attributes otherwise.
Analysis analyze(const ScoreTable& ref, const ScoreTable& gen, const DecisionRule& rule,
                 const AnalyzeOptions& options = {});

}  // namespace biasshift
