#pragma once

#include <cstddef>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace biasshift {

// Which data split a table of classifier scores came from.
class SplitTag {
 public:
  enum class Kind { train, val, gen, custom };

  SplitTag() = default;
  SplitTag(Kind kind) : kind_(kind) {}  // NOLINT(google-explicit-constructor)

  static SplitTag custom(std::string label);
  // Accepts "train", "val", "gen"; anything else becomes custom(label).
  static SplitTag parse(std::string_view text);

  Kind kind() const noexcept { return kind_; }
  std::string name() const;

  friend bool operator==(const SplitTag&, const SplitTag&) = default;

 private:
  Kind kind_ = Kind::val;
  std::string label_;
};

// Pre-sigmoid logits of one split: rows are samples, columns attributes.
// Immutable once constructed; every constructor validates its invariants.
class ScoreTable {
 public:
  // `columns[j]` holds every sample's score for attribute j.
  ScoreTable(SplitTag split, std::vector<std::string> attributes,
             std::vector<std::vector<double>> columns,
             std::optional<std::vector<std::string>> sample_ids = std::nullopt);

  const SplitTag& split() const noexcept { return split_; }
  const std::vector<std::string>& attributes() const noexcept { return attributes_; }
  const std::optional<std::vector<std::string>>& sample_ids() const noexcept {
    return sample_ids_;
  }

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return attributes_.size(); }

  std::span<const double> column(std::size_t j) const;
  // Column by attribute name; nullopt when the attribute is absent.
  std::optional<std::size_t> find(std::string_view attribute) const;
  double at(std::size_t row, std::size_t col) const;

  friend bool operator==(const ScoreTable&, const ScoreTable&) = default;

 private:
  SplitTag split_;
  std::vector<std::string> attributes_;
  std::size_t rows_ = 0;
  std::vector<double> values_;  // column-major
  std::optional<std::vector<std::string>> sample_ids_;
};

// Per-attribute decision thresholds in logit space. A sample is positive
// for an attribute when its score is >= the threshold.
class DecisionRule {
 public:
  DecisionRule() = default;
  explicit DecisionRule(std::map<std::string, double> thresholds);

  // Same threshold `t` for every attribute, then per-attribute overrides.
  static DecisionRule uniform(const std::vector<std::string>& attributes, double t,
                              const std::map<std::string, double>& overrides = {});

  // Throws MismatchError when no threshold exists for `attribute`.
  double threshold(std::string_view attribute) const;
  bool covers(std::string_view attribute) const;
  const std::map<std::string, double, std::less<>>& thresholds() const noexcept {
    return thresholds_;
  }

 private:
  std::map<std::string, double, std::less<>> thresholds_;
};

// Wide CSV: header `sample_id,<attr>,<attr>...`, one sample per row.
// Errors are InputError with the row and column of the offending cell.
ScoreTable read_score_table(std::istream& in, SplitTag split,
                            std::string_view source_name = "<stream>");
ScoreTable load_score_table(const std::filesystem::path& path, SplitTag split);

void write_score_table(const ScoreTable& table, std::ostream& out);
void write_score_table(const ScoreTable& table, const std::filesystem::path& path);

}  // namespace biasshift
