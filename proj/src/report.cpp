#include "biasshift/report.hpp"

#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "biasshift/error.hpp"
#include "biasshift/format.hpp"
#include "csv_util.hpp"

namespace biasshift {

using ordered_json = nlohmann::ordered_json;

std::string_view to_string(Category c) noexcept {
  return c == Category::spectrum ? "spectrum" : "non_spectrum";
}

Category parse_category(std::string_view text) {
  if (text == "spectrum") return Category::spectrum;
  if (text == "non_spectrum") return Category::non_spectrum;
  throw InputError("unknown category '" + std::string(text) + "'");
}

ReportFormat parse_report_format(std::string_view text) {
  if (text == "json") return ReportFormat::json;
  if (text == "csv") return ReportFormat::csv;
  throw InputError("unknown report format '" + std::string(text) + "' (expected json or csv)");
}

namespace {

const char* const kCsvColumns[] = {"attribute",   "threshold",        "p_ref",
                                   "p_gen",       "bias_shift",       "boundary_density",
                                   "category",    "emd",              "ci_half_width",
                                   "bandwidth_ref", "bandwidth_gen"};
constexpr std::size_t kCsvColumnCount = std::size(kCsvColumns);

ordered_json optional_number(const std::optional<double>& v) {
  return v ? ordered_json(*v) : ordered_json(nullptr);
}

std::optional<double> read_optional(const ordered_json& j) {
  if (j.is_null()) return std::nullopt;
  return j.get<double>();
}

ordered_json metadata_to_json(const RunMetadata& m) {
  ordered_json overrides = ordered_json::object();
  for (const auto& [name, t] : m.threshold_overrides) overrides[name] = t;
  return ordered_json{{"tool_version", m.tool_version},
                      {"seed", m.seed},
                      {"default_threshold", m.default_threshold},
                      {"threshold_overrides", overrides},
                      {"categorization_threshold", m.categorization_threshold},
                      {"bandwidth_rule", m.bandwidth_rule},
                      {"reference_split", m.reference_split},
                      {"generated_split", m.generated_split},
                      {"replicates", m.replicates}};
}

void write_json(const Report& report, std::ostream& out) {
  ordered_json records = ordered_json::array();
  for (const auto& r : report.records) {
    records.push_back(ordered_json{{"attribute", r.attribute},
                                   {"threshold", r.threshold},
                                   {"p_ref", r.p_ref},
                                   {"p_gen", r.p_gen},
                                   {"bias_shift", r.bias_shift},
                                   {"boundary_density", r.boundary_density},
                                   {"category", to_string(r.category)},
                                   {"emd", r.emd},
                                   {"ci_half_width", optional_number(r.ci_half_width)},
                                   {"bandwidth_ref", r.bandwidth_ref},
                                   {"bandwidth_gen", r.bandwidth_gen}});
  }
  const auto& a = report.abs;
  ordered_json doc{
      {"metadata", metadata_to_json(report.metadata)},
      {"records", records},
      {"abs",
       {{"overall", a.overall},
        {"spectrum", optional_number(a.spectrum)},
        {"non_spectrum", optional_number(a.non_spectrum)},
        {"counts", {{"spectrum", a.spectrum_count}, {"non_spectrum", a.non_spectrum_count}}}}}};
  out << doc.dump(2) << '\n';
}

Report read_json(std::istream& in) {
  ordered_json doc;
  try {
    doc = ordered_json::parse(in);
    Report report;
    const auto& m = doc.at("metadata");
    report.metadata.tool_version = m.at("tool_version").get<std::string>();
    report.metadata.seed = m.at("seed").get<std::uint64_t>();
    report.metadata.default_threshold = m.at("default_threshold").get<double>();
    for (const auto& [name, t] : m.at("threshold_overrides").items()) {
      report.metadata.threshold_overrides[name] = t.get<double>();
    }
    report.metadata.categorization_threshold = m.at("categorization_threshold").get<double>();
    report.metadata.bandwidth_rule = m.at("bandwidth_rule").get<std::string>();
    report.metadata.reference_split = m.at("reference_split").get<std::string>();
    report.metadata.generated_split = m.at("generated_split").get<std::string>();
    report.metadata.replicates = m.at("replicates").get<std::size_t>();

    for (const auto& j : doc.at("records")) {
      BiasRecord r;
      r.attribute = j.at("attribute").get<std::string>();
      r.threshold = j.at("threshold").get<double>();
      r.p_ref = j.at("p_ref").get<double>();
      r.p_gen = j.at("p_gen").get<double>();
      r.bias_shift = j.at("bias_shift").get<double>();
      r.boundary_density = j.at("boundary_density").get<double>();
      r.category = parse_category(j.at("category").get<std::string>());
      r.emd = j.at("emd").get<double>();
      r.ci_half_width = read_optional(j.at("ci_half_width"));
      r.bandwidth_ref = j.at("bandwidth_ref").get<double>();
      r.bandwidth_gen = j.at("bandwidth_gen").get<double>();
      report.records.push_back(std::move(r));
    }
    const auto& a = doc.at("abs");
    report.abs.overall = a.at("overall").get<double>();
    report.abs.spectrum = read_optional(a.at("spectrum"));
    report.abs.non_spectrum = read_optional(a.at("non_spectrum"));
    report.abs.spectrum_count = a.at("counts").at("spectrum").get<std::size_t>();
    report.abs.non_spectrum_count = a.at("counts").at("non_spectrum").get<std::size_t>();
    return report;
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("malformed JSON report: ") + e.what());
  }
}

std::string optional_cell(const std::optional<double>& v) {
  return v ? format_double(*v) : std::string();
}

void write_csv(const Report& report, std::ostream& out) {
  for (std::size_t c = 0; c < kCsvColumnCount; ++c) out << (c ? "," : "") << kCsvColumns[c];
  out << '\n';
  for (const auto& r : report.records) {
    out << csv::quote_if_needed(r.attribute) << ',' << format_double(r.threshold) << ','
        << format_double(r.p_ref) << ',' << format_double(r.p_gen) << ','
        << format_double(r.bias_shift) << ',' << format_double(r.boundary_density) << ','
        << to_string(r.category) << ',' << format_double(r.emd) << ','
        << optional_cell(r.ci_half_width) << ',' << format_double(r.bandwidth_ref) << ','
        << format_double(r.bandwidth_gen) << '\n';
  }
  const auto& a = report.abs;
  const auto& m = report.metadata;
  out << "# abs_overall," << format_double(a.overall) << '\n'
      << "# abs_spectrum," << optional_cell(a.spectrum) << '\n'
      << "# abs_non_spectrum," << optional_cell(a.non_spectrum) << '\n'
      << "# count_spectrum," << a.spectrum_count << '\n'
      << "# count_non_spectrum," << a.non_spectrum_count << '\n'
      << "# tool_version," << csv::quote_if_needed(m.tool_version) << '\n'
      << "# seed," << m.seed << '\n'
      << "# default_threshold," << format_double(m.default_threshold) << '\n'
      << "# categorization_threshold," << format_double(m.categorization_threshold) << '\n'
      << "# bandwidth_rule," << csv::quote_if_needed(m.bandwidth_rule) << '\n'
      << "# reference_split," << csv::quote_if_needed(m.reference_split) << '\n'
      << "# generated_split," << csv::quote_if_needed(m.generated_split) << '\n'
      << "# replicates," << m.replicates << '\n';
  for (const auto& [name, t] : m.threshold_overrides) {
    out << "# threshold_override," << csv::quote_if_needed(name) << ',' << format_double(t)
        << '\n';
  }
}

double number_cell(const std::string& cell, const csv::CsvLocation& loc) {
  const auto v = parse_double(cell);
  if (!v) {
    throw InputError(std::string(loc.source) + ":" + std::to_string(loc.line) +
                     ": non-numeric cell '" + cell + "'");
  }
  return *v;
}

std::optional<double> optional_number_cell(const std::string& cell, const csv::CsvLocation& loc) {
  if (cell.empty()) return std::nullopt;
  return number_cell(cell, loc);
}

std::size_t count_cell(const std::string& cell, const csv::CsvLocation& loc) {
  return static_cast<std::size_t>(number_cell(cell, loc));
}

Report read_csv(std::istream& in) {
  Report report;
  csv::CsvLocation loc{"<report>", 0};
  std::string line;
  bool header_seen = false;
  while (std::getline(in, line)) {
    ++loc.line;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (trim(line).empty()) continue;
    if (line.starts_with('#')) {
      const auto fields = csv::split_record(std::string_view(line).substr(1), loc);
      if (fields.size() < 2) throw InputError("malformed report summary line " + line);
      const std::string& key = fields[0];
      const std::string& value = fields[1];
      auto& a = report.abs;
      auto& m = report.metadata;
      if (key == "abs_overall") a.overall = number_cell(value, loc);
      else if (key == "abs_spectrum") a.spectrum = optional_number_cell(value, loc);
      else if (key == "abs_non_spectrum") a.non_spectrum = optional_number_cell(value, loc);
      else if (key == "count_spectrum") a.spectrum_count = count_cell(value, loc);
      else if (key == "count_non_spectrum") a.non_spectrum_count = count_cell(value, loc);
      else if (key == "tool_version") m.tool_version = value;
      else if (key == "seed") m.seed = std::stoull(value);
      else if (key == "default_threshold") m.default_threshold = number_cell(value, loc);
      else if (key == "categorization_threshold") m.categorization_threshold = number_cell(value, loc);
      else if (key == "bandwidth_rule") m.bandwidth_rule = value;
      else if (key == "reference_split") m.reference_split = value;
      else if (key == "generated_split") m.generated_split = value;
      else if (key == "replicates") m.replicates = count_cell(value, loc);
      else if (key == "threshold_override" && fields.size() == 3) {
        m.threshold_overrides[fields[1]] = number_cell(fields[2], loc);
      }
      continue;
    }
    const auto fields = csv::split_record(line, loc);
    if (!header_seen) {
      if (fields.size() != kCsvColumnCount || fields[0] != "attribute") {
        throw InputError("malformed CSV report header");
      }
      header_seen = true;
      continue;
    }
    if (fields.size() != kCsvColumnCount) {
      throw InputError("<report>:" + std::to_string(loc.line) + ": ragged report row");
    }
    BiasRecord r;
    r.attribute = fields[0];
    r.threshold = number_cell(fields[1], loc);
    r.p_ref = number_cell(fields[2], loc);
    r.p_gen = number_cell(fields[3], loc);
    r.bias_shift = number_cell(fields[4], loc);
    r.boundary_density = number_cell(fields[5], loc);
    r.category = parse_category(fields[6]);
    r.emd = number_cell(fields[7], loc);
    r.ci_half_width = optional_number_cell(fields[8], loc);
    r.bandwidth_ref = number_cell(fields[9], loc);
    r.bandwidth_gen = number_cell(fields[10], loc);
    report.records.push_back(std::move(r));
  }
  if (!header_seen) throw InputError("CSV report has no header");
  return report;
}

}  // namespace

void write_report(const Report& report, std::ostream& out, ReportFormat format) {
  if (report.records.empty()) throw std::invalid_argument("report needs at least one record");
  if (format == ReportFormat::json) {
    write_json(report, out);
  } else {
    write_csv(report, out);
  }
}

void write_report(const Report& report, const std::filesystem::path& path, ReportFormat format) {
  if (report.records.empty()) throw std::invalid_argument("report needs at least one record");
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw InputError("cannot write report '" + path.string() + "'");
  write_report(report, out, format);
  out.flush();
  if (!out) throw InputError("error while writing report '" + path.string() + "'");
}

void write_report(const std::vector<BiasRecord>& records, const AbsSummary& abs,
                  const std::filesystem::path& path, ReportFormat format) {
  Report report;
  report.records = records;
  report.abs = abs;
  write_report(report, path, format);
}

Report read_report(std::istream& in, ReportFormat format) {
  return format == ReportFormat::json ? read_json(in) : read_csv(in);
}

Report read_report(const std::filesystem::path& path, ReportFormat format) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open report '" + path.string() + "'");
  return read_report(in, format);
}

}  // namespace biasshift
