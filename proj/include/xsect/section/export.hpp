#pragma once

#include <ostream>

#include "xsect/section/circle_map.hpp"
#include "xsect/section/poincare.hpp"

namespace xsect::section {

/// One row per sample: coordinates, F residual, unit normal. 17 significant digits.
void writeSectionCsv(std::ostream& out, const CrossSection& section, const CircleMap& f, int dim);

/// One row per seed: seed coordinates, return time, image coordinates.
void writePoincareCsv(std::ostream& out, const PoincareData& pd, int dim);

}  // namespace xsect::section
