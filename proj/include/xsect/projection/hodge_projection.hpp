#pragma once

#include <vector>

#include "xsect/forms/fields.hpp"

namespace xsect::projection {

struct ClosedApproximation {
  forms::KForm omega;                ///< harmonic + exact part, closed
  double distance = 0.0;             ///< supNorm_g(theta - omega)
  double dBound = 0.0;               ///< supNorm_g(d theta)
  std::vector<double> harmonicPart;  ///< mean of each component
  forms::ScalarField exactPartPotential;  ///< f with exact part = df, zero mean
};

/// Flat Fourier split theta = mean + df + coexact; keeps mean + df.
/// Norms are measured in g.
ClosedApproximation hodgeClosedProjection(const forms::KForm& theta, const forms::MetricField& g);
ClosedApproximation hodgeClosedProjection(const forms::KForm& theta);

struct PropositionBoundReport {
  double distance = 0.0;
  double dBound = 0.0;
  double slack = 0.0;
  bool passed = false;
};

/// distance <= dBound * (1 + slack), with a 1e-12 absolute floor for closed input.
PropositionBoundReport checkPropositionBound(const forms::KForm& theta, const forms::MetricField& g,
                                             double slack = 0.05);

}  // namespace xsect::projection
