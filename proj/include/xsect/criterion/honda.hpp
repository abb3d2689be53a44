#pragma once

#include <array>
#include <cstddef>
#include <vector>

#include "xsect/forms/scenario.hpp"

namespace xsect::criterion {

/// A point of a hypersurface with its unit normal and an orthonormal tangent
/// frame, oriented so that det[normal, tangents...] > 0.
struct SectionSample {
  forms::Point point{0.0, 0.0, 0.0};
  forms::Point normal{0.0, 0.0, 0.0};
  std::array<forms::Point, 2> tangents{};
};

struct HondaReport {
  std::size_t sampleCount = 0;
  double minValue = 0.0;
  double maxValue = 0.0;
  double minAbsValue = 0.0;  ///< transversality margin
  double threshold = 0.0;
  bool uniformSign = false;
  bool passed = false;
};

/// Evaluates (i_X Omega)(t_1, ..., t_{n-1}) at every sample; passes when all
/// values share a sign and stay above the positivity margin in size.
HondaReport hondaCheck(const std::vector<SectionSample>& samples, const forms::Scenario& s);

}  // namespace xsect::criterion
