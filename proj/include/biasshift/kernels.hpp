#pragma once

// Data-parallel inner loops.
//
// Each kernel exists twice: `serial::` is the plain reference loop, kept for
// testing and benchmarking, and `parallel::` is the OpenMP version used by the
// library. A parallel kernel only distributes independent outputs (query
// points, sample indices, replicates) across threads; it never reorders a
// floating-point reduction, so both versions return bit-identical results
// for any thread count.

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "biasshift/gaussian.hpp"
#include "biasshift/rng.hpp"

namespace biasshift {

enum class Execution { serial, parallel };

namespace kernels {

// Gaussian kernel terms farther than this many bandwidths from the query are
// skipped; each omitted term is below 2.6e-18 of a peak term.
inline constexpr double kKernelCutoff = 9.0;

// Kernel density at `x` over `sorted` samples with bandwidth `h`.
double kde_point(std::span<const double> sorted, double h, double x) noexcept;

// First k entries of a uniformly random permutation of [0, population).
// Dense and sparse variants of the same Fisher-Yates walk give identical
// output for the same stream.
std::vector<std::uint64_t> draw_without_replacement(std::uint64_t population, std::uint64_t k,
                                                    rng::Stream& stream);

// Column-major 0/1 matrix of "score >= threshold" flags plus the
// whole-population positive count of each column.
struct PositiveFlags {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<std::uint8_t> flags;
  std::vector<std::uint64_t> totals;

  std::span<const std::uint8_t> column(std::size_t j) const {
    return std::span<const std::uint8_t>(flags).subspan(j * rows, rows);
  }
};

// Sample i of the mixture uses counters 3i, 3i+1 (Box-Muller) and 3i+2
// (component choice) of the stream keyed `key`; `offset` is added to every
// draw.
double mixture_draw(std::span<const GaussianComponent> components, const rng::CounterRng& rng,
                    std::uint64_t i, double offset) noexcept;

namespace serial {

void kde_evaluate(std::span<const double> sorted, double h, std::span<const double> queries,
                  std::span<double> out);

void draw_mixture(std::span<const GaussianComponent> components, std::uint64_t key,
                  double offset, std::span<double> out);

// counts[r] = positives in a with-replacement resample of `positive`, using
// stream derive_key(seed, {kTagBootstrap, stream_id, r}).
void bootstrap_counts(std::span<const std::uint8_t> positive, std::uint64_t seed,
                      std::uint64_t stream_id, std::span<std::uint64_t> counts);

// abs_out[r] = mean over attributes of |p_subsample - p_population| for a
// without-replacement subsample of `size` rows, using stream
// derive_key(seed, {kTagSubsample, size, r}).
void subsample_abs(const PositiveFlags& flags, std::uint64_t size, std::uint64_t seed,
                   std::span<double> abs_out);

}  // namespace serial

namespace parallel {

void kde_evaluate(std::span<const double> sorted, double h, std::span<const double> queries,
                  std::span<double> out);

void draw_mixture(std::span<const GaussianComponent> components, std::uint64_t key,
                  double offset, std::span<double> out);

void bootstrap_counts(std::span<const std::uint8_t> positive, std::uint64_t seed,
                      std::uint64_t stream_id, std::span<std::uint64_t> counts);

void subsample_abs(const PositiveFlags& flags, std::uint64_t size, std::uint64_t seed,
                   std::span<double> abs_out);

}  // namespace parallel

}  // namespace kernels
}  // namespace biasshift
