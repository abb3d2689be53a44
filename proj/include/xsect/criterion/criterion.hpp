#pragma once

#include <string>

#include "xsect/error.hpp"
#include "xsect/forms/scenario.hpp"
#include "xsect/projection/hodge_projection.hpp"

namespace xsect::criterion {

using forms::Point;
using forms::Scenario;

enum class Verdict { Pass, Fail };

const char* verdictName(Verdict v);

struct CriterionReport {
  double mSquared = 0.0;
  double deltaNorm = 0.0;  ///< supNorm_g(delta_g(i_X Omega))
  double dFlatNorm = 0.0;  ///< supNorm_g(d X^flat)
  double margin = 0.0;     ///< mSquared - deltaNorm
  double guardBand = 0.0;
  Verdict verdict = Verdict::Fail;
  double normChainResidual = 0.0;
};

/// Thrown by checkCriterion when the scenario does not validate.
class InvalidScenario : public Error {
 public:
  explicit InvalidScenario(forms::ValidationReport report);
  const forms::ValidationReport& report() const { return report_; }

 private:
  forms::ValidationReport report_;
};

/// Computes the report without validating the scenario first.
CriterionReport evaluateCriterion(const Scenario& s);

/// PASS iff margin > 10 * identity tolerance.
CriterionReport checkCriterion(const Scenario& s);

struct PositivityCertificate {
  bool accepted = false;
  forms::KForm omega;
  double minPairing = 0.0;  ///< min over the grid of omega(X)
  Point worstPoint{0.0, 0.0, 0.0};
  double distance = 0.0;
  double lowerBoundCheck = 0.0;  ///< mSquared - distance
  /// min over the grid of |X|^2 - |omega - theta| |X|; omega(X) is never below it.
  double pointwiseChainBound = 0.0;
  projection::ClosedApproximation approximation;
  std::string failure;
};

/// Projects X^flat onto closed forms and checks omega(X) > positivity margin.
PositivityCertificate buildClosedOneForm(const Scenario& s);

struct HarmonicityReport {
  double closedNorm = 0.0;    ///< supNorm_g(d(i_X Omega))
  double coclosedNorm = 0.0;  ///< supNorm_g(delta_g(i_X Omega))
  double tol = 0.0;
  bool closed = false;
  bool coclosed = false;
  bool harmonic = false;
};

HarmonicityReport harmonicityCertificate(const Scenario& s);

}  // namespace xsect::criterion
