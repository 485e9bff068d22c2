#include "biasshift/score_table.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <set>
#include <sstream>
#include <utility>

#include "biasshift/error.hpp"
#include "biasshift/format.hpp"
#include "csv_util.hpp"

namespace biasshift {

using csv::CsvLocation;
using csv::quote_if_needed;
using csv::split_record;

SplitTag SplitTag::custom(std::string label) {
  SplitTag tag(Kind::custom);
  tag.label_ = std::move(label);
  return tag;
}

SplitTag SplitTag::parse(std::string_view text) {
  if (text == "train") return Kind::train;
  if (text == "val") return Kind::val;
  if (text == "gen") return Kind::gen;
  return custom(std::string(text));
}

std::string SplitTag::name() const {
  switch (kind_) {
    case Kind::train: return "train";
    case Kind::val: return "val";
    case Kind::gen: return "gen";
    case Kind::custom: return label_;
  }
  return label_;
}

ScoreTable::ScoreTable(SplitTag split, std::vector<std::string> attributes,
                       std::vector<std::vector<double>> columns,
                       std::optional<std::vector<std::string>> sample_ids)
    : split_(std::move(split)),
      attributes_(std::move(attributes)),
      sample_ids_(std::move(sample_ids)) {
  if (attributes_.empty()) throw InputError("score table has no attribute columns");
  if (columns.size() != attributes_.size()) {
    throw InputError("score table has " + std::to_string(attributes_.size()) +
                     " attribute names but " + std::to_string(columns.size()) + " columns");
  }
  std::set<std::string_view> seen;
  for (const auto& name : attributes_) {
    if (name.empty()) throw InputError("empty attribute name");
    if (!seen.insert(name).second) throw InputError("duplicate attribute name '" + name + "'");
  }

  rows_ = columns.front().size();
  if (rows_ == 0) throw InputError("score table has no rows");
  values_.reserve(rows_ * attributes_.size());
  for (std::size_t j = 0; j < columns.size(); ++j) {
    if (columns[j].size() != rows_) {
      throw InputError("column '" + attributes_[j] + "' has " + std::to_string(columns[j].size()) +
                       " rows, expected " + std::to_string(rows_));
    }
    for (std::size_t i = 0; i < rows_; ++i) {
      if (!std::isfinite(columns[j][i])) {
        throw InputError("non-finite score at row " + std::to_string(i + 1) + ", column '" +
                         attributes_[j] + "'");
      }
    }
    values_.insert(values_.end(), columns[j].begin(), columns[j].end());
  }

  if (sample_ids_) {
    if (sample_ids_->size() != rows_) {
      throw InputError("sample_ids has " + std::to_string(sample_ids_->size()) +
                       " entries, expected " + std::to_string(rows_));
    }
    for (std::size_t i = 0; i < rows_; ++i) {
      if ((*sample_ids_)[i].empty()) {
        throw InputError("empty sample_id at row " + std::to_string(i + 1));
      }
    }
  }
}

std::span<const double> ScoreTable::column(std::size_t j) const {
  if (j >= attributes_.size()) throw std::out_of_range("ScoreTable::column");
  return std::span<const double>(values_).subspan(j * rows_, rows_);
}

std::optional<std::size_t> ScoreTable::find(std::string_view attribute) const {
  auto it = std::find(attributes_.begin(), attributes_.end(), attribute);
  if (it == attributes_.end()) return std::nullopt;
  return static_cast<std::size_t>(it - attributes_.begin());
}

double ScoreTable::at(std::size_t row, std::size_t col) const {
  if (row >= rows_ || col >= attributes_.size()) throw std::out_of_range("ScoreTable::at");
  return values_[col * rows_ + row];
}

DecisionRule::DecisionRule(std::map<std::string, double> thresholds) {
  for (auto& [name, t] : thresholds) {
    if (!std::isfinite(t)) throw InputError("non-finite threshold for attribute '" + name + "'");
    thresholds_.emplace(name, t);
  }
}

DecisionRule DecisionRule::uniform(const std::vector<std::string>& attributes, double t,
                                   const std::map<std::string, double>& overrides) {
  std::map<std::string, double> all;
  for (const auto& a : attributes) all[a] = t;
  for (const auto& [name, value] : overrides) {
    if (!all.contains(name)) {
      throw MismatchError("threshold override for unknown attribute '" + name + "'");
    }
    all[name] = value;
  }
  return DecisionRule(std::move(all));
}

double DecisionRule::threshold(std::string_view attribute) const {
  auto it = thresholds_.find(attribute);
  if (it == thresholds_.end()) {
    throw MismatchError("no decision threshold for attribute '" + std::string(attribute) + "'");
  }
  return it->second;
}

bool DecisionRule::covers(std::string_view attribute) const {
  return thresholds_.find(attribute) != thresholds_.end();
}

namespace {

std::string where(const CsvLocation& loc) {
  return std::string(loc.source) + ":" + std::to_string(loc.line);
}

}  // namespace

ScoreTable read_score_table(std::istream& in, SplitTag split, std::string_view source_name) {
  CsvLocation loc{source_name, 0};
  std::vector<std::string> lines;
  {
    std::string line;
    while (std::getline(in, line)) {
      if (!line.empty() && line.back() == '\r') line.pop_back();
      lines.push_back(std::move(line));
    }
  }
  while (!lines.empty() && trim(lines.back()).empty()) lines.pop_back();
  if (lines.empty()) throw InputError(std::string(source_name) + ": empty file, missing header");

  std::string_view header_line = lines.front();
  if (header_line.starts_with("\xEF\xBB\xBF")) header_line.remove_prefix(3);
  loc.line = 1;
  const auto header = split_record(header_line, loc);
  if (header.front() != "sample_id") {
    throw InputError(where(loc) + ": malformed header, first column must be 'sample_id' (found '" +
                     header.front() + "')");
  }
  if (header.size() < 2) throw InputError(where(loc) + ": malformed header, no attribute columns");

  std::vector<std::string> attributes(header.begin() + 1, header.end());
  std::set<std::string_view> seen;
  for (std::size_t j = 0; j < attributes.size(); ++j) {
    if (attributes[j].empty()) {
      throw InputError(where(loc) + ": malformed header, empty attribute name in column " +
                       std::to_string(j + 2));
    }
    if (!seen.insert(attributes[j]).second) {
      throw InputError(where(loc) + ": malformed header, duplicate attribute '" + attributes[j] +
                       "'");
    }
  }

  const std::size_t data_rows = lines.size() - 1;
  if (data_rows == 0) throw InputError(std::string(source_name) + ": empty table, no data rows");

  std::vector<std::vector<double>> columns(attributes.size());
  for (auto& c : columns) c.reserve(data_rows);
  std::vector<std::string> ids;
  ids.reserve(data_rows);
  bool any_id = false;

  for (std::size_t r = 0; r < data_rows; ++r) {
    loc.line = r + 2;
    const auto fields = split_record(lines[r + 1], loc);
    const std::string row_desc = where(loc) + ": row " + std::to_string(r + 1);
    if (fields.size() != header.size()) {
      throw InputError(row_desc + ": ragged row, expected " + std::to_string(header.size()) +
                       " fields, found " + std::to_string(fields.size()));
    }
    any_id = any_id || !fields.front().empty();
    ids.push_back(fields.front());
    for (std::size_t j = 0; j < attributes.size(); ++j) {
      const std::string& cell = fields[j + 1];
      const std::string col_desc =
          row_desc + ", column " + std::to_string(j + 2) + " ('" + attributes[j] + "')";
      const auto value = parse_double(cell);
      if (!value) throw InputError(col_desc + ": non-numeric cell '" + cell + "'");
      if (!std::isfinite(*value)) throw InputError(col_desc + ": non-finite cell '" + cell + "'");
      columns[j].push_back(*value);
    }
  }

  std::optional<std::vector<std::string>> sample_ids;
  if (any_id) {
    for (std::size_t r = 0; r < ids.size(); ++r) {
      if (ids[r].empty()) {
        throw InputError(std::string(source_name) + ":" + std::to_string(r + 2) + ": row " +
                         std::to_string(r + 1) + ", column 1 ('sample_id'): empty sample_id");
      }
    }
    sample_ids = std::move(ids);
  }
  return ScoreTable(std::move(split), std::move(attributes), std::move(columns),
                    std::move(sample_ids));
}

ScoreTable load_score_table(const std::filesystem::path& path, SplitTag split) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open score table '" + path.string() + "'");
  return read_score_table(in, std::move(split), path.string());
}

void write_score_table(const ScoreTable& table, std::ostream& out) {
  out << "sample_id";
  for (const auto& a : table.attributes()) out << ',' << quote_if_needed(a);
  out << '\n';
  const auto& ids = table.sample_ids();
  for (std::size_t i = 0; i < table.rows(); ++i) {
    if (ids) out << quote_if_needed((*ids)[i]);
    for (std::size_t j = 0; j < table.cols(); ++j) out << ',' << format_double(table.at(i, j));
    out << '\n';
  }
}

void write_score_table(const ScoreTable& table, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw InputError("cannot write score table '" + path.string() + "'");
  write_score_table(table, out);
  if (!out) throw InputError("error while writing '" + path.string() + "'");
}

}  // namespace biasshift
