#pragma once

#include <random>

#include "xsect/forms/fields.hpp"
#include "xsect/forms/scenario.hpp"

namespace xsect::forms {

/// Random trigonometric polynomial with wavenumbers |k_a| <= maxWave and
/// coefficients uniform in [-amplitude, amplitude].
ScalarField randomBandLimitedField(const TorusDomain& domain, std::mt19937_64& rng,
                                   int maxWave = 3, double amplitude = 1.0);

KForm randomForm(const TorusDomain& domain, int degree, std::mt19937_64& rng, int maxWave = 3);

VectorField randomVectorField(const TorusDomain& domain, std::mt19937_64& rng, int maxWave = 3);

/// Smooth SPD metric field g = B B^T + floor * I with B = I + strength * (random
/// band-limited matrix field).
MetricField randomSpdMetric(const TorusDomain& domain, std::mt19937_64& rng, int maxWave = 2,
                            double strength = 0.3, double floor = 0.25);

/// Valid scenario on a random SPD metric: Omega is the g-volume and
/// i_X Omega = mean + perturbation * d(random band-limited (n-2)-form),
/// with the mean drawn from [0.5, 1.5] per component.
Scenario randomScenario(const TorusDomain& domain, std::mt19937_64& rng, double metricStrength = 0.3,
                        double perturbation = 0.05);

}  // namespace xsect::forms
