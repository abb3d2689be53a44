#pragma once

#include <functional>
#include <vector>

#include "xsect/forms/scenario.hpp"

namespace xsect::section {

/// Base map and roof on T^{n-1}, given as functions of the base point
/// (entries beyond n-1 are ignored).
struct SuspensionSpec {
  int baseDim = 1;
  std::function<forms::Point(const forms::Point&)> baseMap;
  std::function<double(const forms::Point&)> roof;
};

struct Suspension {
  forms::Scenario scenario;
  std::vector<double> translation;  ///< the base map as a translation of T^{n-1}
};

/// Mapping torus of a translation y -> y + alpha on T^n, n = baseDim + 1.
///
/// The flow coordinate is axis 0 and X = (1, alpha) / r(y). The metric
/// g = r u u^T + r^{1/(n-1)} (I - u u^T), u = (1, alpha) / |(1, alpha)|, makes
/// X^flat = (1, alpha) constant and Omega = r dx^1 ^ ... ^ dx^n its volume.
/// Throws "base map must be a translation" for anything else.
Suspension suspend(const SuspensionSpec& spec, int resolution);

}  // namespace xsect::section
