#include "biasshift/stats.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <stdexcept>

namespace biasshift {

namespace {

std::vector<double> sorted_copy(std::span<const double> values) {
  std::vector<double> out(values.begin(), values.end());
  std::sort(out.begin(), out.end());
  return out;
}

double sample_stddev(std::span<const double> values) {
  const double n = static_cast<double>(values.size());
  double mean = 0.0;
  for (double v : values) mean += v;
  mean /= n;
  double ss = 0.0;
  for (double v : values) ss += (v - mean) * (v - mean);
  return std::sqrt(ss / (n - 1.0));
}

}  // namespace

double sorted_quantile(std::span<const double> sorted, double p) {
  if (sorted.empty()) throw std::invalid_argument("quantile of empty sample");
  const double pos = p * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  return sorted[lo] + frac * (sorted[hi] - sorted[lo]);
}

double kde_bandwidth(std::span<const double> scores) {
  const auto sorted = sorted_copy(scores);
  if (sorted.size() < 2 || sorted.front() == sorted.back()) {
    throw std::invalid_argument("degenerate sample: bandwidth needs at least 2 distinct values");
  }
  const double n = static_cast<double>(sorted.size());
  const double sd = sample_stddev(sorted);
  const double iqr = sorted_quantile(sorted, 0.75) - sorted_quantile(sorted, 0.25);
  const double spread = std::min(sd, iqr / 1.34);
  const double h = 0.9 * spread * std::pow(n, -0.2);
  const double floor = 1e-6 * (sorted.back() - sorted.front());
  return std::max(h, floor);
}

DensityEstimate DensityEstimate::fit(std::span<const double> scores) {
  return DensityEstimate(scores, kde_bandwidth(scores));
}

DensityEstimate::DensityEstimate(std::span<const double> scores, double bandwidth)
    : sorted_(sorted_copy(scores)), bandwidth_(bandwidth) {
  if (sorted_.empty()) throw std::invalid_argument("density estimate needs samples");
  if (!(bandwidth_ > 0.0) || !std::isfinite(bandwidth_)) {
    throw std::invalid_argument("bandwidth must be positive and finite");
  }
  if (!std::isfinite(sorted_.front()) || !std::isfinite(sorted_.back())) {
    throw std::invalid_argument("density estimate samples must be finite");
  }
}

double DensityEstimate::density_at(double x) const noexcept {
  return kernels::kde_point(sorted_, bandwidth_, x);
}

std::vector<double> DensityEstimate::evaluate(std::span<const double> xs, Execution exec) const {
  std::vector<double> out(xs.size());
  if (exec == Execution::serial) {
    kernels::serial::kde_evaluate(sorted_, bandwidth_, xs, out);
  } else {
    kernels::parallel::kde_evaluate(sorted_, bandwidth_, xs, out);
  }
  return out;
}

std::vector<double> DensityEstimate::support_grid(std::size_t points) const {
  if (points < 2) throw std::invalid_argument("grid needs at least 2 points");
  const double lo = sorted_.front() - 5.0 * bandwidth_;
  const double hi = sorted_.back() + 5.0 * bandwidth_;
  const double step = (hi - lo) / static_cast<double>(points - 1);
  std::vector<double> grid(points);
  for (std::size_t i = 0; i < points; ++i) grid[i] = lo + step * static_cast<double>(i);
  grid.back() = hi;
  return grid;
}

double DensityEstimate::grid_integral(std::size_t points, Execution exec) const {
  const auto grid = support_grid(points);
  const auto f = evaluate(grid, exec);
  double sum = 0.0;
  for (std::size_t i = 0; i + 1 < grid.size(); ++i) {
    sum += 0.5 * (f[i] + f[i + 1]) * (grid[i + 1] - grid[i]);
  }
  return sum;
}

double kde_density_at(const DensityEstimate& estimate, double x) {
  return estimate.density_at(x);
}

double ecdf_at(std::span<const double> scores, double x) {
  if (scores.empty()) throw std::invalid_argument("ecdf of empty sample");
  std::size_t below = 0;
  for (double s : scores) below += (s < x) ? 1 : 0;
  return static_cast<double>(below) / static_cast<double>(scores.size());
}

double emd_1d(std::span<const double> a, std::span<const double> b) {
  if (a.empty() || b.empty()) throw std::invalid_argument("emd of empty sample");
  const auto sa = sorted_copy(a);
  const auto sb = sorted_copy(b);

  if (sa.size() == sb.size()) {
    double sum = 0.0;
    for (std::size_t i = 0; i < sa.size(); ++i) sum += std::fabs(sa[i] - sb[i]);
    return sum / static_cast<double>(sa.size());
  }

  // Integrate |F_a - F_b| between consecutive merged breakpoints. The ECDF
  // gap is kept as the exact integer |i*m - j*n| over n*m.
  const std::size_t n = sa.size();
  const std::size_t m = sb.size();
  std::size_t i = 0;
  std::size_t j = 0;
  double x = std::min(sa.front(), sb.front());
  double total = 0.0;
  while (i < n || j < m) {
    const double next = (j >= m || (i < n && sa[i] <= sb[j])) ? sa[i] : sb[j];
    if (next > x) {
      const auto lhs = static_cast<long long>(i * m);
      const auto rhs = static_cast<long long>(j * n);
      total += static_cast<double>(std::llabs(lhs - rhs)) * (next - x);
      x = next;
    }
    while (i < n && sa[i] == next) ++i;
    while (j < m && sb[j] == next) ++j;
  }
  return total / (static_cast<double>(n) * static_cast<double>(m));
}

}  // namespace biasshift
