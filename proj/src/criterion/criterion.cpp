#include "xsect/criterion/criterion.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "xsect/forms/operators.hpp"

namespace xsect::criterion {

namespace {

std::string describeFailures(const forms::ValidationReport& report) {
  std::string msg = "invalid scenario:";
  for (const auto& c : report.checks) {
    if (!c.passed) msg += " " + c.name;
  }
  return msg;
}

}  // namespace

const char* verdictName(Verdict v) { return v == Verdict::Pass ? "PASS" : "FAIL"; }

InvalidScenario::InvalidScenario(forms::ValidationReport report)
    : Error(describeFailures(report)), report_(std::move(report)) {}

CriterionReport evaluateCriterion(const Scenario& s) {
  CriterionReport r;
  const forms::KForm canonical = forms::interiorProduct(s.x, s.omega);
  const forms::KForm theta = forms::flat(s.x, s.metric);
  r.mSquared = forms::minSpeed(s.x, s.metric).mSquared;
  r.deltaNorm = forms::supNorm(forms::codifferential(canonical, s.metric), s.metric);
  r.dFlatNorm = forms::supNorm(forms::exteriorDerivative(theta), s.metric);
  r.margin = r.mSquared - r.deltaNorm;
  r.guardBand = 10.0 * s.tol.identityTol;
  r.verdict = r.margin > r.guardBand ? Verdict::Pass : Verdict::Fail;
  r.normChainResidual = std::abs(r.deltaNorm - r.dFlatNorm);
  return r;
}

CriterionReport checkCriterion(const Scenario& s) {
  forms::ValidationReport report = forms::validateScenario(s);
  if (!report.ok()) throw InvalidScenario(std::move(report));
  return evaluateCriterion(s);
}

PositivityCertificate buildClosedOneForm(const Scenario& s) {
  const forms::KForm theta = forms::flat(s.x, s.metric);
  projection::ClosedApproximation approx = projection::hodgeClosedProjection(theta, s.metric);
  const forms::ScalarField pairing = forms::pair(approx.omega, s.x);
  const forms::ScalarField speedSq = forms::pair(theta, s.x);
  const forms::ScalarField gap = forms::pointwiseNorm(theta - approx.omega, s.metric);

  PositivityCertificate c{false, approx.omega, 0.0, {}, approx.distance, 0.0, 0.0, approx, {}};
  std::size_t worst = 0;
  double minPair = std::numeric_limits<double>::infinity();
  double chain = std::numeric_limits<double>::infinity();
  double minSq = std::numeric_limits<double>::infinity();
  for (std::size_t p = 0; p < pairing.size(); ++p) {
    if (pairing[p] < minPair) {
      minPair = pairing[p];
      worst = p;
    }
    minSq = std::min(minSq, speedSq[p]);
    chain = std::min(chain, speedSq[p] - gap[p] * std::sqrt(speedSq[p]));
  }
  c.minPairing = minPair;
  c.worstPoint = s.domain().point(worst);
  c.lowerBoundCheck = minSq - approx.distance;
  c.pointwiseChainBound = chain;
  c.accepted = minPair > s.tol.positivityMargin;
  if (!c.accepted) {
    std::ostringstream msg;
    msg << "min omega(X) = " << minPair << " is not above the positivity margin " << s.tol.positivityMargin
        << " (grid point " << worst << ")";
    c.failure = msg.str();
  }
  return c;
}

HarmonicityReport harmonicityCertificate(const Scenario& s) {
  const forms::KForm canonical = forms::interiorProduct(s.x, s.omega);
  HarmonicityReport r;
  r.tol = s.tol.closednessTol;
  r.closedNorm = forms::supNorm(forms::exteriorDerivative(canonical), s.metric);
  r.coclosedNorm = forms::supNorm(forms::codifferential(canonical, s.metric), s.metric);
  r.closed = r.closedNorm <= r.tol;
  r.coclosed = r.coclosedNorm <= r.tol;
  r.harmonic = r.closed && r.coclosed;
  return r;
}

}  // namespace xsect::criterion
