#include "biasshift/cli.hpp"

#include <fstream>
#include <functional>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "biasshift/error.hpp"
#include "biasshift/format.hpp"
#include "biasshift/metrics.hpp"
#include "biasshift/plot.hpp"
#include "biasshift/report.hpp"
#include "biasshift/resample.hpp"
#include "biasshift/score_table.hpp"
#include "biasshift/shiftlab.hpp"
#include "biasshift/stats.hpp"

namespace biasshift::cli {

namespace {

constexpr const char* kBandwidthRule =
    "gaussian kernel; silverman h = 0.9 * min(sd, iqr / 1.34) * n^-0.2; floor 1e-6 * range; "
    "one bandwidth per attribute and split";

struct ThresholdFlags {
  double default_threshold = 0.0;
  std::vector<std::string> overrides;

  std::map<std::string, double> parsed() const {
    std::map<std::string, double> out;
    for (const auto& item : overrides) {
      const auto eq = item.rfind('=');
      if (eq == std::string::npos || eq == 0) {
        throw InputError("--threshold expects ATTR=VALUE, got '" + item + "'");
      }
      const auto value = parse_double(trim(std::string_view(item).substr(eq + 1)));
      if (!value || !std::isfinite(*value)) {
        throw InputError("--threshold value for '" + item.substr(0, eq) + "' is not a finite number");
      }
      out[item.substr(0, eq)] = *value;
    }
    return out;
  }

  DecisionRule rule(const ScoreTable& table) const {
    if (!std::isfinite(default_threshold)) throw InputError("--default-threshold must be finite");
    return DecisionRule::uniform(table.attributes(), default_threshold, parsed());
  }

  void add_to(CLI::App* cmd) {
    cmd->add_option("--threshold", overrides,
                    "Per-attribute decision threshold ATTR=VALUE in logit units (repeatable)");
    cmd->add_option("--default-threshold", default_threshold,
                    "Decision threshold for attributes without an override");
  }
};

// Writes to `path`, or to `fallback` when the path is empty or "-".
void emit(const std::string& path, std::ostream& fallback,
          const std::function<void(std::ostream&)>& write) {
  if (path.empty() || path == "-") {
    write(fallback);
    return;
  }
  std::ofstream file(path, std::ios::binary | std::ios::trunc);
  if (!file) throw InputError("cannot write '" + path + "'");
  write(file);
  file.flush();
  if (!file) throw InputError("error while writing '" + path + "'");
}

std::string percent(double fraction) { return format_percent(fraction); }

std::string percent(const std::optional<double>& fraction) {
  return fraction ? format_percent(*fraction) : std::string("n/a");
}

struct AnalyzeArgs {
  std::string ref_path;
  std::string gen_path;
  std::string out_path;
  std::string format = "json";
  ThresholdFlags thresholds;
  double cat_threshold = kDefaultCategorizationThreshold;
  std::uint64_t seed = 0;
  std::size_t replicates = kDefaultReplicates;
  std::string ref_split = "val";
  std::string gen_split = "gen";
  std::string densities_path;
  std::string svg_path;
};

int cmd_analyze(const AnalyzeArgs& a, std::ostream& out, std::ostream& err) {
  const auto format = parse_report_format(a.format);
  if (!(a.cat_threshold >= 0.0)) throw InputError("--cat-threshold must be non-negative");
  if (a.replicates == 1) throw InputError("--replicates must be 0 (off) or at least 2");
  const auto ref = load_score_table(a.ref_path, SplitTag::parse(a.ref_split));
  const auto gen = load_score_table(a.gen_path, SplitTag::parse(a.gen_split));
  const auto rule = a.thresholds.rule(ref);

  AnalyzeOptions options;
  options.categorization_threshold = a.cat_threshold;
  options.replicates = a.replicates;
  options.seed = a.seed;
  auto analysis = analyze(ref, gen, rule, options);

  Report report;
  report.metadata.tool_version = kToolVersion;
  report.metadata.seed = a.seed;
  report.metadata.default_threshold = a.thresholds.default_threshold;
  report.metadata.threshold_overrides = a.thresholds.parsed();
  report.metadata.categorization_threshold = a.cat_threshold;
  report.metadata.bandwidth_rule = kBandwidthRule;
  report.metadata.reference_split = ref.split().name();
  report.metadata.generated_split = gen.split().name();
  report.metadata.replicates = a.replicates;
  report.records = std::move(analysis.records);
  report.abs = analysis.abs;

  emit(a.out_path, out, [&](std::ostream& o) { write_report(report, o, format); });

  if (!a.densities_path.empty() || !a.svg_path.empty()) {
    const auto curves = density_curves(ref, gen, rule);
    if (!a.densities_path.empty()) {
      emit(a.densities_path, out, [&](std::ostream& o) { write_density_csv(curves, o); });
    }
    if (!a.svg_path.empty()) {
      emit(a.svg_path, out, [&](std::ostream& o) { write_density_svg(curves, o); });
    }
  }

  std::ostream& summary = a.out_path.empty() || a.out_path == "-" ? err : out;
  summary << "ABS overall " << percent(report.abs.overall) << " over " << report.records.size()
          << " attributes; spectrum " << percent(report.abs.spectrum) << " ("
          << report.abs.spectrum_count << "), non-spectrum " << percent(report.abs.non_spectrum)
          << " (" << report.abs.non_spectrum_count << ")\n";
  return kExitOk;
}

struct CategorizeArgs {
  std::string ref_path;
  std::string out_path;
  std::string format = "csv";
  ThresholdFlags thresholds;
  double cat_threshold = kDefaultCategorizationThreshold;
};

int cmd_categorize(const CategorizeArgs& a, std::ostream& out, std::ostream&) {
  const auto format = parse_report_format(a.format);
  if (!(a.cat_threshold >= 0.0)) throw InputError("--cat-threshold must be non-negative");
  const auto ref = load_score_table(a.ref_path, SplitTag::Kind::val);
  const auto rule = a.thresholds.rule(ref);

  struct Row {
    std::string attribute;
    double threshold, bandwidth, density;
    Category category;
  };
  std::vector<Row> rows;
  for (std::size_t j = 0; j < ref.cols(); ++j) {
    const auto& name = ref.attributes()[j];
    double h = 0.0;
    try {
      h = kde_bandwidth(ref.column(j));
    } catch (const std::invalid_argument&) {
      throw InputError("attribute '" + name + "': scores are constant, density undefined");
    }
    const DensityEstimate estimate(ref.column(j), h);
    const double t = rule.threshold(name);
    const double density = kde_density_at(estimate, t);
    rows.push_back({name, t, h, density, categorize(density, a.cat_threshold)});
  }

  emit(a.out_path, out, [&](std::ostream& o) {
    if (format == ReportFormat::csv) {
      o << "attribute,threshold,bandwidth,boundary_density,category\n";
      for (const auto& r : rows) {
        o << r.attribute << ',' << format_double(r.threshold) << ',' << format_double(r.bandwidth)
          << ',' << format_double(r.density) << ',' << to_string(r.category) << '\n';
      }
    } else {
      nlohmann::ordered_json doc = nlohmann::ordered_json::array();
      for (const auto& r : rows) {
        doc.push_back({{"attribute", r.attribute},
                       {"threshold", r.threshold},
                       {"bandwidth", r.bandwidth},
                       {"boundary_density", r.density},
                       {"category", to_string(r.category)}});
      }
      o << nlohmann::ordered_json{{"categorization_threshold", a.cat_threshold},
                                  {"attributes", doc}}
               .dump(2)
        << '\n';
    }
  });
  return kExitOk;
}

struct SamplingErrorArgs {
  std::string ref_path;
  std::string out_path;
  std::vector<std::size_t> sizes;
  std::size_t replicates = kDefaultReplicates;
  std::uint64_t seed = 0;
  ThresholdFlags thresholds;
};

int cmd_sampling_error(const SamplingErrorArgs& a, std::ostream& out, std::ostream&) {
  const auto ref = load_score_table(a.ref_path, SplitTag::Kind::val);
  const auto rule = a.thresholds.rule(ref);
  ResamplePlan plan{a.sizes, a.replicates, a.seed};
  const auto curve = sampling_error_curve(ref, rule, plan);
  emit(a.out_path, out, [&](std::ostream& o) { write_curve_csv(curve, o); });
  return kExitOk;
}

struct SimulateArgs {
  std::string builtin;
  std::string scenario_path;
  std::string out_path;
  std::size_t n = 1000000;
  std::uint64_t seed = 0;
};

int cmd_simulate(const SimulateArgs& a, std::ostream& out, std::ostream& err) {
  if (a.builtin.empty() == a.scenario_path.empty()) {
    throw InputError("simulate needs exactly one of --builtin or --scenario");
  }
  if (a.n == 0) throw InputError("--n must be at least 1");
  std::ostream& summary = a.out_path.empty() || a.out_path == "-" ? err : out;

  std::vector<SimulationRow> rows;
  if (a.builtin == "fig1") {
    if (a.n < 10000) throw InputError("--builtin fig1 needs --n >= 10000");
    const auto result = fig1_experiment(a.n, a.seed);
    rows = result.rows;
    summary << "fig1: min high-density shift " << format_double(result.min_high_empirical)
            << ", max low-density shift " << format_double(result.max_low_empirical)
            << "; contrast >= 10x: " << (result.shift_contrast_holds ? "yes" : "no")
            << "; emd within 10% of delta: " << (result.emd_matches_delta ? "yes" : "no") << '\n';
  } else {
    const auto scenarios =
        a.builtin.empty() ? load_scenarios(a.scenario_path) : builtin_scenarios(a.builtin);
    for (const auto& s : scenarios) rows.push_back(simulate(s, a.n, a.seed));
    std::size_t within = 0;
    for (const auto& r : rows) {
      within += std::fabs(r.empirical_shift - r.analytic_shift) <= r.tolerance ? 1 : 0;
    }
    summary << within << " of " << rows.size()
            << " scenarios: empirical shift within 3 sigma of the analytic shift\n";
  }
  emit(a.out_path, out, [&](std::ostream& o) { write_simulation_csv(rows, o); });
  return kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Attribute bias shift measurement between reference and generated score tables",
               "biasshift"};
  app.set_version_flag("--version", std::string(kToolVersion));
  app.require_subcommand(1);
  app.option_defaults()->always_capture_default();

  AnalyzeArgs analyze_args;
  auto* analyze_cmd = app.add_subcommand(
      "analyze", "Per-attribute bias shift, boundary density, category and EMD, plus ABS");
  analyze_cmd->add_option("--ref", analyze_args.ref_path, "Reference score table (CSV)")
      ->required();
  analyze_cmd->add_option("--gen", analyze_args.gen_path, "Generated score table (CSV)")
      ->required();
  analyze_cmd->add_option("--out", analyze_args.out_path, "Report path (stdout when omitted)");
  analyze_cmd->add_option("--format", analyze_args.format, "Report format")
      ->check(CLI::IsMember({"json", "csv"}));
  analyze_args.thresholds.add_to(analyze_cmd);
  analyze_cmd->add_option("--cat-threshold", analyze_args.cat_threshold,
                          "Boundary density above which an attribute is spectrum-based");
  analyze_cmd->add_option("--seed", analyze_args.seed, "Bootstrap seed");
  analyze_cmd->add_option("--replicates", analyze_args.replicates,
                          "Bootstrap replicates for the shift confidence interval (0 = off)");
  analyze_cmd->add_option("--ref-split", analyze_args.ref_split,
                          "Split name recorded for the reference table");
  analyze_cmd->add_option("--gen-split", analyze_args.gen_split,
                          "Split name recorded for the generated table");
  analyze_cmd->add_option("--densities", analyze_args.densities_path,
                          "Also write plot-ready density curves (CSV)");
  analyze_cmd->add_option("--svg", analyze_args.svg_path,
                          "Also write a static SVG of the density curves");

  CategorizeArgs categorize_args;
  auto* categorize_cmd = app.add_subcommand(
      "categorize", "Boundary density and spectrum/non-spectrum category per attribute");
  categorize_cmd->add_option("--ref", categorize_args.ref_path, "Reference score table (CSV)")
      ->required();
  categorize_cmd->add_option("--out", categorize_args.out_path, "Output path (stdout when omitted)");
  categorize_cmd->add_option("--format", categorize_args.format, "Output format")
      ->check(CLI::IsMember({"json", "csv"}));
  categorize_args.thresholds.add_to(categorize_cmd);
  categorize_cmd->add_option("--cat-threshold", categorize_args.cat_threshold,
                             "Boundary density above which an attribute is spectrum-based");

  SamplingErrorArgs sampling_args;
  auto* sampling_cmd = app.add_subcommand(
      "sampling-error", "ABS between random subsets of a table and the full table");
  sampling_cmd->add_option("--ref", sampling_args.ref_path, "Score table to subsample (CSV)")
      ->required();
  sampling_cmd->add_option("--sizes", sampling_args.sizes, "Subset sizes, comma separated")
      ->required()
      ->delimiter(',');
  sampling_cmd->add_option("--replicates", sampling_args.replicates, "Subsets per size");
  sampling_cmd->add_option("--seed", sampling_args.seed, "Random seed");
  sampling_cmd->add_option("--out", sampling_args.out_path, "Curve CSV path (stdout when omitted)");
  sampling_args.thresholds.add_to(sampling_cmd);

  SimulateArgs simulate_args;
  auto* simulate_cmd = app.add_subcommand(
      "simulate", "Compare analytic and sampled bias shift for translated mixtures");
  simulate_cmd->add_option("--builtin", simulate_args.builtin,
                           "Built-in scenario set: fig1 or translation-suite");
  simulate_cmd->add_option("--scenario", simulate_args.scenario_path, "Scenario file");
  simulate_cmd->add_option("--n", simulate_args.n, "Samples per draw");
  simulate_cmd->add_option("--seed", simulate_args.seed, "Random seed");
  simulate_cmd->add_option("--out", simulate_args.out_path, "Result CSV path (stdout when omitted)");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForVersion&) {
    out << kToolVersion << '\n';
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::CallForHelp&) {
    // help() shows the selected subcommand's help when one was given.
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kExitInput;
  }

  try {
    if (*analyze_cmd) return cmd_analyze(analyze_args, out, err);
    if (*categorize_cmd) return cmd_categorize(categorize_args, out, err);
    if (*sampling_cmd) return cmd_sampling_error(sampling_args, out, err);
    if (*simulate_cmd) return cmd_simulate(simulate_args, out, err);
  } catch (const MismatchError& e) {
    err << "error: " << e.what() << '\n';
    return kExitMismatch;
  } catch (const InputError& e) {
    err << "error: " << e.what() << '\n';
    return kExitInput;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return kExitInput;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << '\n';
    return kExitInternal;
  }
  return kExitInternal;
}

}  // namespace biasshift::cli
