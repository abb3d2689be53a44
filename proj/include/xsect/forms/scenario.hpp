#pragma once

#include <string>
#include <vector>

#include "xsect/forms/fields.hpp"

namespace xsect::forms {

struct Tolerances {
  double identityTol = 1e-9;     ///< Omega vs Riemannian volume, relative
  double closednessTol = 1e-8;   ///< sup |d(i_X Omega)|
  double positivityMargin = 1e-6;
};

/// One problem instance: a volume-preserving flow on a flat torus together
/// with a candidate metric.
struct Scenario {
  MetricField metric;
  VectorField x;
  KForm omega;  ///< invariant volume form, degree n
  Tolerances tol;

  const TorusDomain& domain() const { return metric.domain(); }
  int dim() const { return metric.dim(); }
};

struct ValidationCheck {
  std::string name;
  bool passed;
  double residual;
};

struct ValidationReport {
  std::vector<ValidationCheck> checks;

  bool ok() const;
  const ValidationCheck& check(const std::string& name) const;
};

/// Volume form positive, i_X Omega closed, Omega equal to the g-volume, X
/// non-singular. Never throws for a well-formed scenario; failures are
/// reported per check.
ValidationReport validateScenario(const Scenario& s);

}  // namespace xsect::forms
