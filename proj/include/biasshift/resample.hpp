#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <vector>

#include "biasshift/kernels.hpp"
#include "biasshift/score_table.hpp"

namespace biasshift {

inline constexpr std::size_t kDefaultReplicates = 100;
inline constexpr double kNormal95 = 1.96;

struct ProportionInterval {
  double mean = 0.0;
  double standard_error = 0.0;
  double half_width = 0.0;  // 1.96 * standard_error

  friend bool operator==(const ProportionInterval&, const ProportionInterval&) = default;
};

// Bootstrap (with replacement) of the positive proportion at threshold t.
// Replicate r draws from stream derive_key(seed, {bootstrap, stream_id, r}),
// so the result depends only on (scores, t, replicates, seed, stream_id).
ProportionInterval bootstrap_proportion_ci(std::span<const double> scores, double t,
                                           std::size_t replicates, std::uint64_t seed,
                                           std::uint64_t stream_id = 0,
                                           Execution exec = Execution::parallel);

// Subset sizes and replicate count for a sampling-error study.
struct ResamplePlan {
  std::vector<std::size_t> subsample_sizes;
  std::size_t replicates = kDefaultReplicates;
  std::uint64_t seed = 0;

  void validate() const;
};

struct CurvePoint {
  std::size_t size = 0;
  double mean_abs = 0.0;
  double std_abs = 0.0;  // sample standard deviation over replicates

  friend bool operator==(const CurvePoint&, const CurvePoint&) = default;
};

// For each size, ABS between `replicates` subsets drawn without replacement
// from `ref` and the full table. Throws InputError when a size exceeds the
// row count.
std::vector<CurvePoint> sampling_error_curve(const ScoreTable& ref, const DecisionRule& rule,
                                             const ResamplePlan& plan,
                                             Execution exec = Execution::parallel);

// `size,mean_abs,std` header then one row per point.
void write_curve_csv(std::span<const CurvePoint> curve, std::ostream& out);

// Positive flags of every column of `table` under `rule`.
kernels::PositiveFlags positive_flags(const ScoreTable& table, const DecisionRule& rule);

}  // namespace biasshift
