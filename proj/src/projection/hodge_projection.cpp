#include "xsect/projection/hodge_projection.hpp"

#include <complex>

#include "xsect/error.hpp"
#include "xsect/forms/operators.hpp"
#include "xsect/forms/spectral.hpp"

namespace xsect::projection {

using forms::KForm;
using forms::Spectrum;

ClosedApproximation hodgeClosedProjection(const KForm& theta, const forms::MetricField& g) {
  if (theta.degree() != 1) throw Error("projection expects a 1-form");
  const auto& domain = theta.domain();
  const int n = domain.dim();
  const double total = static_cast<double>(domain.size());

  std::vector<Spectrum> spec;
  for (int a = 0; a < n; ++a) spec.push_back(forms::forwardTransform(theta.component(a)));

  std::vector<double> harmonic(n);
  for (int a = 0; a < n; ++a) harmonic[a] = spec[a].coeffs[0].real() / total;

  // f^ = (sum_j D_j theta^_j) / (sum_j D_j^2); exact part = D_a f^.
  Spectrum potential{domain, std::vector<std::complex<double>>(spec[0].coeffs.size())};
  std::vector<Spectrum> exact(n, potential);
  for (std::size_t i = 0; i < potential.coeffs.size(); ++i) {
    const auto idx = potential.unflatten(i);
    std::complex<double> div = 0.0, lap = 0.0;
    std::array<std::complex<double>, 3> sym{};
    for (int a = 0; a < n; ++a) {
      sym[a] = forms::derivativeSymbol(domain, a, idx[a]);
      div += sym[a] * spec[a].coeffs[i];
      lap += sym[a] * sym[a];
    }
    if (lap == 0.0) continue;
    const std::complex<double> f = div / lap;
    potential.coeffs[i] = f;
    for (int a = 0; a < n; ++a) exact[a].coeffs[i] = sym[a] * f;
  }

  KForm omega(domain, 1);
  for (int a = 0; a < n; ++a) {
    omega.component(a) = forms::inverseTransform(exact[a]);
    for (auto& v : omega.component(a).values()) v += harmonic[a];
  }

  ClosedApproximation out{omega, 0.0, 0.0, harmonic, forms::inverseTransform(potential)};
  out.distance = forms::supNorm(theta - omega, g);
  out.dBound = forms::supNorm(forms::exteriorDerivative(theta), g);
  return out;
}

ClosedApproximation hodgeClosedProjection(const KForm& theta) {
  return hodgeClosedProjection(theta, forms::MetricField::flat(theta.domain()));
}

PropositionBoundReport checkPropositionBound(const KForm& theta, const forms::MetricField& g,
                                             double slack) {
  const ClosedApproximation approx = hodgeClosedProjection(theta, g);
  PropositionBoundReport r;
  r.distance = approx.distance;
  r.dBound = approx.dBound;
  r.slack = slack;
  r.passed = r.distance <= r.dBound * (1.0 + slack) + 1e-12;
  return r;
}

}  // namespace xsect::projection
