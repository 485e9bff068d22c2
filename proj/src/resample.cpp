#include "biasshift/resample.hpp"

#include <cmath>
#include <ostream>
#include <stdexcept>

#include "biasshift/error.hpp"
#include "biasshift/format.hpp"

namespace biasshift {

namespace {

// Mean and n-1 standard deviation, summed in index order.
std::pair<double, double> mean_and_sd(std::span<const double> values) {
  const double n = static_cast<double>(values.size());
  double mean = 0.0;
  for (double v : values) mean += v;
  mean /= n;
  double ss = 0.0;
  for (double v : values) ss += (v - mean) * (v - mean);
  return {mean, std::sqrt(ss / (n - 1.0))};
}

}  // namespace

ProportionInterval bootstrap_proportion_ci(std::span<const double> scores, double t,
                                           std::size_t replicates, std::uint64_t seed,
                                           std::uint64_t stream_id, Execution exec) {
  if (scores.empty()) throw std::invalid_argument("bootstrap of empty sample");
  if (replicates < 2) throw std::invalid_argument("bootstrap needs at least 2 replicates");

  std::vector<std::uint8_t> positive(scores.size());
  for (std::size_t i = 0; i < scores.size(); ++i) positive[i] = scores[i] >= t ? 1 : 0;

  std::vector<std::uint64_t> counts(replicates);
  if (exec == Execution::serial) {
    kernels::serial::bootstrap_counts(positive, seed, stream_id, counts);
  } else {
    kernels::parallel::bootstrap_counts(positive, seed, stream_id, counts);
  }

  std::vector<double> proportions(replicates);
  const double n = static_cast<double>(scores.size());
  for (std::size_t r = 0; r < replicates; ++r) {
    proportions[r] = static_cast<double>(counts[r]) / n;
  }
  const auto [mean, sd] = mean_and_sd(proportions);
  return {mean, sd, kNormal95 * sd};
}

void ResamplePlan::validate() const {
  if (subsample_sizes.empty()) throw InputError("resample plan needs at least one size");
  for (std::size_t s : subsample_sizes) {
    if (s == 0) throw InputError("subsample sizes must be positive");
  }
  if (replicates < 2) throw InputError("resample plan needs at least 2 replicates");
}

kernels::PositiveFlags positive_flags(const ScoreTable& table, const DecisionRule& rule) {
  kernels::PositiveFlags flags;
  flags.rows = table.rows();
  flags.cols = table.cols();
  flags.flags.resize(flags.rows * flags.cols);
  flags.totals.assign(flags.cols, 0);
  for (std::size_t j = 0; j < flags.cols; ++j) {
    const double t = rule.threshold(table.attributes()[j]);
    const auto col = table.column(j);
    for (std::size_t i = 0; i < flags.rows; ++i) {
      const std::uint8_t positive = col[i] >= t ? 1 : 0;
      flags.flags[j * flags.rows + i] = positive;
      flags.totals[j] += positive;
    }
  }
  return flags;
}

std::vector<CurvePoint> sampling_error_curve(const ScoreTable& ref, const DecisionRule& rule,
                                             const ResamplePlan& plan, Execution exec) {
  plan.validate();
  for (std::size_t s : plan.subsample_sizes) {
    if (s > ref.rows()) {
      throw InputError("subsample size " + std::to_string(s) + " exceeds population of " +
                       std::to_string(ref.rows()) + " rows");
    }
  }
  const auto flags = positive_flags(ref, rule);

  std::vector<CurvePoint> curve;
  curve.reserve(plan.subsample_sizes.size());
  std::vector<double> abs_values(plan.replicates);
  for (std::size_t size : plan.subsample_sizes) {
    if (exec == Execution::serial) {
      kernels::serial::subsample_abs(flags, size, plan.seed, abs_values);
    } else {
      kernels::parallel::subsample_abs(flags, size, plan.seed, abs_values);
    }
    const auto [mean, sd] = mean_and_sd(abs_values);
    curve.push_back({size, mean, sd});
  }
  return curve;
}

void write_curve_csv(std::span<const CurvePoint> curve, std::ostream& out) {
  out << "size,mean_abs,std\n";
  for (const auto& p : curve) {
    out << p.size << ',' << format_double(p.mean_abs) << ',' << format_double(p.std_abs) << '\n';
  }
}

}  // namespace biasshift
