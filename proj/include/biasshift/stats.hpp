#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "biasshift/kernels.hpp"

namespace biasshift {

// Silverman's rule of thumb, h = 0.9 * min(sd, IQR / 1.34) * n^(-1/5), with
// sd the n-1 sample standard deviation and IQR from linearly interpolated
// quantiles. The result is floored at 1e-6 * (max - min) so it stays
// positive when both spread measures collapse.
// Throws std::invalid_argument ("degenerate sample") with < 2 distinct values.
double kde_bandwidth(std::span<const double> scores);

// Linearly interpolated quantile of sorted data (the "type 7" definition).
double sorted_quantile(std::span<const double> sorted, double p);

// Gaussian-kernel density estimate of one attribute's logits.
class DensityEstimate {
 public:
  // Bandwidth from kde_bandwidth().
  static DensityEstimate fit(std::span<const double> scores);

  DensityEstimate(std::span<const double> scores, double bandwidth);

  double bandwidth() const noexcept { return bandwidth_; }
  std::span<const double> samples() const noexcept { return sorted_; }
  std::size_t size() const noexcept { return sorted_.size(); }

  double density_at(double x) const noexcept;
  std::vector<double> evaluate(std::span<const double> xs,
                               Execution exec = Execution::parallel) const;

  // `points` evenly spaced values over [min - 5h, max + 5h].
  std::vector<double> support_grid(std::size_t points = 2048) const;

  // Trapezoid integral of the density over support_grid(points).
  double grid_integral(std::size_t points = 2048, Execution exec = Execution::parallel) const;

 private:
  std::vector<double> sorted_;
  double bandwidth_ = 0.0;
};

// (1 / (n h)) * sum_i phi((x - s_i) / h).
double kde_density_at(const DensityEstimate& estimate, double x);

// Fraction of scores strictly below x.
double ecdf_at(std::span<const double> scores, double x);

// Wasserstein-1 distance between the empirical distributions of a and b.
double emd_1d(std::span<const double> a, std::span<const double> b);

}  // namespace biasshift
