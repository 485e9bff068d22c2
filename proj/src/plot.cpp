#include "biasshift/plot.hpp"

#include <algorithm>
#include <cstdio>
#include <optional>
#include <ostream>
#include <stdexcept>

#include "biasshift/error.hpp"
#include "biasshift/format.hpp"
#include "biasshift/stats.hpp"
#include "csv_util.hpp"

namespace biasshift {

std::vector<DensityCurve> density_curves(const ScoreTable& ref, const ScoreTable& gen,
                                         const DecisionRule& rule, std::size_t points) {
  if (points < 2) throw std::invalid_argument("density curves need at least 2 points");
  std::vector<DensityCurve> curves;
  for (std::size_t j = 0; j < ref.cols(); ++j) {
    const auto& name = ref.attributes()[j];
    const auto g = gen.find(name);
    if (!g) throw MismatchError("attribute '" + name + "' missing from generated table");
    const auto ref_col = ref.column(j);
    const auto gen_col = gen.column(*g);

    const auto ref_est = DensityEstimate::fit(ref_col);
    std::optional<DensityEstimate> gen_est;
    try {
      gen_est.emplace(DensityEstimate::fit(gen_col));
    } catch (const std::invalid_argument&) {
    }

    DensityCurve c;
    c.attribute = name;
    c.threshold = rule.threshold(name);
    const double h = std::max(ref_est.bandwidth(), gen_est ? gen_est->bandwidth() : 0.0);
    const auto [gen_min, gen_max] = std::minmax_element(gen_col.begin(), gen_col.end());
    double lo = std::min(ref_est.samples().front(), *gen_min);
    double hi = std::max(ref_est.samples().back(), *gen_max);
    lo = std::min(lo - 3.0 * h, c.threshold);
    hi = std::max(hi + 3.0 * h, c.threshold);
    c.x.resize(points);
    for (std::size_t i = 0; i < points; ++i) {
      c.x[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(points - 1);
    }
    c.ref_density = ref_est.evaluate(c.x);
    if (gen_est) c.gen_density = gen_est->evaluate(c.x);
    curves.push_back(std::move(c));
  }
  return curves;
}

void write_density_csv(const std::vector<DensityCurve>& curves, std::ostream& out) {
  out << "attribute,split,x,density\n";
  for (const auto& c : curves) {
    const auto name = csv::quote_if_needed(c.attribute);
    for (std::size_t i = 0; i < c.x.size(); ++i) {
      out << name << ",ref," << format_double(c.x[i]) << ',' << format_double(c.ref_density[i])
          << '\n';
    }
    for (std::size_t i = 0; i < c.gen_density.size(); ++i) {
      out << name << ",gen," << format_double(c.x[i]) << ',' << format_double(c.gen_density[i])
          << '\n';
    }
  }
}

namespace {

std::string xml_escape(const std::string& s) {
  std::string out;
  for (char ch : s) {
    switch (ch) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out.push_back(ch);
    }
  }
  return out;
}

std::string fixed(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  return buf;
}

}  // namespace

void write_density_svg(const std::vector<DensityCurve>& curves, std::ostream& out) {
  constexpr double kWidth = 640.0;
  constexpr double kPanel = 180.0;
  constexpr double kMargin = 30.0;
  const double height = kPanel * static_cast<double>(curves.size());
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << fixed(kWidth) << "\" height=\""
      << fixed(height) << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  for (std::size_t k = 0; k < curves.size(); ++k) {
    const auto& c = curves[k];
    const double top = kPanel * static_cast<double>(k);
    double ymax = 0.0;
    for (double d : c.ref_density) ymax = std::max(ymax, d);
    for (double d : c.gen_density) ymax = std::max(ymax, d);
    if (ymax <= 0.0) ymax = 1.0;
    const double x0 = c.x.front();
    const double x1 = c.x.back();
    auto px = [&](double x) { return kMargin + (x - x0) / (x1 - x0) * (kWidth - 2 * kMargin); };
    auto py = [&](double y) { return top + kPanel - kMargin - y / ymax * (kPanel - 2 * kMargin); };
    auto polyline = [&](const std::vector<double>& ys, const char* style) {
      out << "  <polyline fill=\"none\" " << style << " points=\"";
      for (std::size_t i = 0; i < ys.size(); ++i) {
        out << (i ? " " : "") << fixed(px(c.x[i])) << ',' << fixed(py(ys[i]));
      }
      out << "\"/>\n";
    };
    out << "  <text x=\"" << fixed(kMargin) << "\" y=\"" << fixed(top + 18) << "\">"
        << xml_escape(c.attribute) << "</text>\n";
    out << "  <line x1=\"" << fixed(kMargin) << "\" y1=\"" << fixed(py(0)) << "\" x2=\""
        << fixed(kWidth - kMargin) << "\" y2=\"" << fixed(py(0)) << "\" stroke=\"#888\"/>\n";
    polyline(c.ref_density, "stroke=\"#1f77b4\" stroke-width=\"1.5\"");
    if (!c.gen_density.empty()) {
      polyline(c.gen_density, "stroke=\"#d62728\" stroke-width=\"1.5\" stroke-dasharray=\"5,3\"");
    }
    out << "  <line x1=\"" << fixed(px(c.threshold)) << "\" y1=\"" << fixed(top + kMargin)
        << "\" x2=\"" << fixed(px(c.threshold)) << "\" y2=\"" << fixed(py(0))
        << "\" stroke=\"#8c564b\" stroke-width=\"2\"/>\n";
  }
  out << "</svg>\n";
}

}  // namespace biasshift
