#include "biasshift/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <unordered_map>

namespace biasshift::kernels {

double kde_point(std::span<const double> sorted, double h, double x) noexcept {
  const double reach = kKernelCutoff * h;
  const auto lo = std::lower_bound(sorted.begin(), sorted.end(), x - reach);
  const auto hi = std::upper_bound(lo, sorted.end(), x + reach);
  const double inv_h = 1.0 / h;
  double sum = 0.0;
  for (auto it = lo; it != hi; ++it) {
    const double z = (x - *it) * inv_h;
    sum += std::exp(-0.5 * z * z);
  }
  constexpr double kInvSqrt2Pi = 0.3989422804014327;
  return sum * kInvSqrt2Pi / (static_cast<double>(sorted.size()) * h);
}

std::vector<std::uint64_t> draw_without_replacement(std::uint64_t population, std::uint64_t k,
                                                    rng::Stream& stream) {
  if (k > population) throw std::invalid_argument("subsample larger than population");
  std::vector<std::uint64_t> out(k);
  if (k * 8 >= population) {
    std::vector<std::uint64_t> perm(population);
    for (std::uint64_t i = 0; i < population; ++i) perm[i] = i;
    for (std::uint64_t i = 0; i < k; ++i) {
      const std::uint64_t j = i + stream.below(population - i);
      std::swap(perm[i], perm[j]);
      out[i] = perm[i];
    }
    return out;
  }
  // Sparse walk: only displaced slots are stored.
  std::unordered_map<std::uint64_t, std::uint64_t> moved;
  moved.reserve(static_cast<std::size_t>(2 * k));
  auto slot = [&](std::uint64_t i) {
    auto it = moved.find(i);
    return it == moved.end() ? i : it->second;
  };
  for (std::uint64_t i = 0; i < k; ++i) {
    const std::uint64_t j = i + stream.below(population - i);
    const std::uint64_t vi = slot(i);
    const std::uint64_t vj = slot(j);
    moved[j] = vi;
    out[i] = vj;
  }
  return out;
}

double mixture_draw(std::span<const GaussianComponent> components, const rng::CounterRng& rng,
                    std::uint64_t i, double offset) noexcept {
  std::size_t pick = components.size() - 1;
  if (components.size() > 1) {
    const double u = rng.uniform(3 * i + 2);
    double cumulative = 0.0;
    for (std::size_t k = 0; k + 1 < components.size(); ++k) {
      cumulative += components[k].weight;
      if (u < cumulative) {
        pick = k;
        break;
      }
    }
  }
  const double u1 = 1.0 - rng.uniform(3 * i);  // (0, 1]
  const double u2 = rng.uniform(3 * i + 1);
  const double z = std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
  const auto& c = components[pick];
  return (c.mean + c.stddev * z) + offset;
}

namespace {

std::uint64_t bootstrap_one(std::span<const std::uint8_t> positive, std::uint64_t seed,
                            std::uint64_t stream_id, std::uint64_t r) {
  rng::Stream stream(rng::derive_key(seed, {rng::kTagBootstrap, stream_id, r}));
  const std::uint64_t n = positive.size();
  std::uint64_t count = 0;
  for (std::uint64_t i = 0; i < n; ++i) count += positive[stream.below(n)];
  return count;
}

double subsample_one(const PositiveFlags& flags, std::uint64_t size, std::uint64_t seed,
                     std::uint64_t r) {
  rng::Stream stream(rng::derive_key(seed, {rng::kTagSubsample, size, r}));
  const auto rows = draw_without_replacement(flags.rows, size, stream);
  const double n_sub = static_cast<double>(size);
  const double n_pop = static_cast<double>(flags.rows);
  double total = 0.0;
  for (std::size_t j = 0; j < flags.cols; ++j) {
    const auto col = flags.column(j);
    std::uint64_t count = 0;
    for (std::uint64_t row : rows) count += col[row];
    total += std::fabs(static_cast<double>(count) / n_sub -
                       static_cast<double>(flags.totals[j]) / n_pop);
  }
  return total / static_cast<double>(flags.cols);
}

}  // namespace

namespace serial {

void kde_evaluate(std::span<const double> sorted, double h, std::span<const double> queries,
                  std::span<double> out) {
  for (std::size_t q = 0; q < queries.size(); ++q) out[q] = kde_point(sorted, h, queries[q]);
}

void draw_mixture(std::span<const GaussianComponent> components, std::uint64_t key,
                  double offset, std::span<double> out) {
  const rng::CounterRng rng(key);
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = mixture_draw(components, rng, i, offset);
}

void bootstrap_counts(std::span<const std::uint8_t> positive, std::uint64_t seed,
                      std::uint64_t stream_id, std::span<std::uint64_t> counts) {
  for (std::size_t r = 0; r < counts.size(); ++r) {
    counts[r] = bootstrap_one(positive, seed, stream_id, r);
  }
}

void subsample_abs(const PositiveFlags& flags, std::uint64_t size, std::uint64_t seed,
                   std::span<double> abs_out) {
  for (std::size_t r = 0; r < abs_out.size(); ++r) {
    abs_out[r] = subsample_one(flags, size, seed, r);
  }
}

}  // namespace serial

namespace parallel {

void kde_evaluate(std::span<const double> sorted, double h, std::span<const double> queries,
                  std::span<double> out) {
  const auto n = static_cast<std::ptrdiff_t>(queries.size());
#pragma omp parallel for schedule(dynamic, 16)
  for (std::ptrdiff_t q = 0; q < n; ++q) out[q] = kde_point(sorted, h, queries[q]);
}

void draw_mixture(std::span<const GaussianComponent> components, std::uint64_t key,
                  double offset, std::span<double> out) {
  const rng::CounterRng rng(key);
  const auto n = static_cast<std::ptrdiff_t>(out.size());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    out[i] = mixture_draw(components, rng, static_cast<std::uint64_t>(i), offset);
  }
}

void bootstrap_counts(std::span<const std::uint8_t> positive, std::uint64_t seed,
                      std::uint64_t stream_id, std::span<std::uint64_t> counts) {
  const auto n = static_cast<std::ptrdiff_t>(counts.size());
#pragma omp parallel for schedule(dynamic, 1)
  for (std::ptrdiff_t r = 0; r < n; ++r) {
    counts[r] = bootstrap_one(positive, seed, stream_id, static_cast<std::uint64_t>(r));
  }
}

void subsample_abs(const PositiveFlags& flags, std::uint64_t size, std::uint64_t seed,
                   std::span<double> abs_out) {
  const auto n = static_cast<std::ptrdiff_t>(abs_out.size());
#pragma omp parallel for schedule(dynamic, 1)
  for (std::ptrdiff_t r = 0; r < n; ++r) {
    abs_out[r] = subsample_one(flags, size, seed, static_cast<std::uint64_t>(r));
  }
}

}  // namespace parallel

}  // namespace biasshift::kernels
