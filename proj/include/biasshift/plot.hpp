#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "biasshift/score_table.hpp"

namespace biasshift {

// Reference and generated KDE curves of one attribute on a shared grid.
struct DensityCurve {
  std::string attribute;
  double threshold = 0.0;
  std::vector<double> x;
  std::vector<double> ref_density;
  std::vector<double> gen_density;  // empty when the generated column is constant
};

std::vector<DensityCurve> density_curves(const ScoreTable& ref, const ScoreTable& gen,
                                         const DecisionRule& rule, std::size_t points = 256);

// Long form `attribute,split,x,density`, ready for any plotting tool.
void write_density_csv(const std::vector<DensityCurve>& curves, std::ostream& out);

// One panel per attribute: reference solid, generated dashed, boundary as a
// vertical line.
void write_density_svg(const std::vector<DensityCurve>& curves, std::ostream& out);

}  // namespace biasshift
