#include "xsect/forms/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "xsect/error.hpp"
#include "xsect/forms/operators.hpp"

namespace xsect::forms {

bool ValidationReport::ok() const {
  return std::all_of(checks.begin(), checks.end(), [](const auto& c) { return c.passed; });
}

const ValidationCheck& ValidationReport::check(const std::string& name) const {
  for (const auto& c : checks) {
    if (c.name == name) return c;
  }
  throw Error("no validation check named " + name);
}

ValidationReport validateScenario(const Scenario& s) {
  ValidationReport report;
  const auto& volume = s.omega.component(0);

  // (a) Omega is a volume form.
  const double minCoeff = volume.min();
  report.checks.push_back({"volume_form_positive", minCoeff > 0.0, minCoeff});

  // (b) d(i_X Omega) = 0, i.e. the flow preserves Omega.
  const KForm canonical = interiorProduct(s.x, s.omega);
  double closed = 0.0;
  if (canonical.degree() < s.dim()) {
    const KForm d = exteriorDerivative(canonical);
    try {
      closed = supNorm(d, s.metric);
    } catch (const Error&) {
      closed = d.maxAbsCoefficient();
    }
  }
  report.checks.push_back({"canonical_form_closed", closed <= s.tol.closednessTol, closed});

  // (c) Omega is the Riemannian volume of g.
  bool metricOk = true;
  double mismatch = 0.0;
  try {
    const KForm riem = riemannianVolume(s.metric);
    for (std::size_t p = 0; p < volume.size(); ++p) {
      const double ref = riem.component(0)[p];
      mismatch = std::max(mismatch, std::abs(volume[p] - ref) / ref);
    }
  } catch (const Error&) {
    metricOk = false;
    mismatch = std::numeric_limits<double>::infinity();
  }
  report.checks.push_back(
      {"omega_is_riemannian_volume", metricOk && mismatch <= s.tol.identityTol, mismatch});

  // (d) X non-singular in g.
  double speed = 0.0;
  bool nonsingular = metricOk;
  if (metricOk) {
    try {
      speed = minSpeed(s.x, s.metric).mSquared;
    } catch (const Error&) {
      nonsingular = false;
    }
  }
  report.checks.push_back({"vector_field_nonsingular", nonsingular, speed});
  return report;
}

}  // namespace xsect::forms
