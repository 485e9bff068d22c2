#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>

namespace biasshift {

// Whether an attribute's decision boundary sits in a dense part of its
// reference logit distribution.
enum class Category { spectrum, non_spectrum };

std::string_view to_string(Category c) noexcept;
// Throws InputError on anything other than "spectrum" / "non_spectrum".
Category parse_category(std::string_view text);

// Per-attribute result of comparing a reference split with a generated one.
struct BiasRecord {
  std::string attribute;
  double threshold = 0.0;
  double p_ref = 0.0;
  double p_gen = 0.0;
  double bias_shift = 0.0;        // |p_gen - p_ref|
  double boundary_density = 0.0;  // reference KDE at the threshold
  Category category = Category::non_spectrum;
  double emd = 0.0;
  std::optional<double> ci_half_width;  // 95% half-width of bias_shift
  double bandwidth_ref = 0.0;
  double bandwidth_gen = 0.0;

  friend bool operator==(const BiasRecord&, const BiasRecord&) = default;
};

// Average attribute bias shift, overall and per category. A category mean
// is empty when no attribute falls in that category.
struct AbsSummary {
  double overall = 0.0;
  std::optional<double> spectrum;
  std::optional<double> non_spectrum;
  std::size_t spectrum_count = 0;
  std::size_t non_spectrum_count = 0;

  friend bool operator==(const AbsSummary&, const AbsSummary&) = default;
};

}  // namespace biasshift
