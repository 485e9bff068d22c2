#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "biasshift/records.hpp"

namespace biasshift {

enum class ReportFormat { json, csv };

ReportFormat parse_report_format(std::string_view text);

// Everything needed to reproduce the numbers of a report from its inputs.
struct RunMetadata {
  std::string tool_version;
  std::uint64_t seed = 0;
  double default_threshold = 0.0;
  std::map<std::string, double> threshold_overrides;
  double categorization_threshold = 0.01;
  std::string bandwidth_rule;
  std::string reference_split;
  std::string generated_split;
  std::size_t replicates = 0;

  friend bool operator==(const RunMetadata&, const RunMetadata&) = default;
};

struct Report {
  RunMetadata metadata;
  std::vector<BiasRecord> records;
  AbsSummary abs;

  friend bool operator==(const Report&, const Report&) = default;
};

// JSON: {"metadata": {...}, "records": [...], "abs": {"overall", "spectrum",
// "non_spectrum", "counts"}}.
// CSV: one row per attribute, then `#`-prefixed `key,value` summary lines.
// Numbers use the shortest round-trip decimal form. Throws
// std::invalid_argument on an empty record list.
void write_report(const Report& report, std::ostream& out, ReportFormat format);
void write_report(const Report& report, const std::filesystem::path& path, ReportFormat format);
void write_report(const std::vector<BiasRecord>& records, const AbsSummary& abs,
                  const std::filesystem::path& path, ReportFormat format);

Report read_report(std::istream& in, ReportFormat format);
Report read_report(const std::filesystem::path& path, ReportFormat format);

}  // namespace biasshift
