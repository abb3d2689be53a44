#include "xsect/forms/random.hpp"

#include <cmath>
#include <numbers>

#include "xsect/error.hpp"
#include "xsect/forms/operators.hpp"
#include "xsect/forms/spectral.hpp"

namespace xsect::forms {

ScalarField randomBandLimitedField(const TorusDomain& domain, std::mt19937_64& rng, int maxWave,
                                   double amplitude) {
  std::uniform_real_distribution<double> coeff(-amplitude, amplitude);
  const int n = domain.dim();
  struct Term {
    std::array<int, 3> k;
    double a, b;
  };
  std::vector<Term> terms;
  for (int a = 0; a < n; ++a) {
    if (2 * maxWave >= domain.resolution(a)) throw Error("random field bandwidth exceeds grid");
  }
  const int kz = n == 3 ? maxWave : 0;
  // Half of the wavenumber lattice; cos/sin pairs cover the other half.
  for (int k0 = 0; k0 <= maxWave; ++k0) {
    for (int k1 = -maxWave; k1 <= maxWave; ++k1) {
      for (int k2 = -kz; k2 <= kz; ++k2) {
        if (k0 == 0 && (k1 < 0 || (k1 == 0 && k2 < 0))) continue;
        const double a = coeff(rng);
        const double b = coeff(rng);
        terms.push_back({{k0, k1, k2}, a, (k0 == 0 && k1 == 0 && k2 == 0) ? 0.0 : b});
      }
    }
  }
  const double scale = 1.0 / std::sqrt(static_cast<double>(terms.size()));

  // Assemble the half spectrum directly; a*cos + b*sin has coefficient
  // (a - ib)/2 at k and its conjugate at -k.
  const double total = static_cast<double>(domain.size());
  const int last = n - 1;
  const int half = domain.resolution(last) / 2 + 1;
  Spectrum spec{domain, std::vector<std::complex<double>>(domain.size() / domain.resolution(last) * half)};
  auto store = [&](std::array<int, 3> k, std::complex<double> c) {
    if (k[last] < 0) return;
    std::size_t flat = 0;
    for (int a = 0; a < last; ++a) {
      const int na = domain.resolution(a);
      flat = flat * na + static_cast<std::size_t>((k[a] % na + na) % na);
    }
    flat = flat * half + static_cast<std::size_t>(k[last]);
    spec.coeffs[flat] += c;
  };
  for (const auto& t : terms) {
    std::array<int, 3> k = t.k;
    std::array<int, 3> minus{-k[0], -k[1], -k[2]};
    if (k == std::array<int, 3>{0, 0, 0}) {
      store(k, total * t.a * scale);
      continue;
    }
    const std::complex<double> c(0.5 * t.a * scale * total, -0.5 * t.b * scale * total);
    store(k, c);
    store(minus, std::conj(c));
  }
  return inverseTransform(spec);
}

KForm randomForm(const TorusDomain& domain, int degree, std::mt19937_64& rng, int maxWave) {
  KForm form(domain, degree);
  for (std::size_t c = 0; c < form.componentCount(); ++c) {
    form.component(c) = randomBandLimitedField(domain, rng, maxWave);
  }
  return form;
}

VectorField randomVectorField(const TorusDomain& domain, std::mt19937_64& rng, int maxWave) {
  std::vector<ScalarField> comps;
  for (int a = 0; a < domain.dim(); ++a) comps.push_back(randomBandLimitedField(domain, rng, maxWave));
  return VectorField(std::move(comps));
}

MetricField randomSpdMetric(const TorusDomain& domain, std::mt19937_64& rng, int maxWave,
                            double strength, double floor) {
  const int n = domain.dim();
  std::vector<ScalarField> entries;
  for (int i = 0; i < n * n; ++i) entries.push_back(randomBandLimitedField(domain, rng, maxWave));
  std::vector<double> data(domain.size() * n * n);
  for (std::size_t p = 0; p < domain.size(); ++p) {
    SmallMatrix b = SmallMatrix::Identity(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) b(i, j) += strength * entries[i * n + j][p];
    SmallMatrix g = b * b.transpose();
    g.diagonal().array() += floor;
    // Exact symmetry for the constructor's check.
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) data[(p * n + i) * n + j] = 0.5 * (g(i, j) + g(j, i));
  }
  return MetricField(domain, std::move(data));
}

Scenario randomScenario(const TorusDomain& domain, std::mt19937_64& rng, double metricStrength,
                        double perturbation) {
  const int n = domain.dim();
  MetricField g = randomSpdMetric(domain, rng, 2, metricStrength);
  KForm omega = riemannianVolume(g);
  std::uniform_real_distribution<double> mean(0.5, 1.5);
  std::vector<double> c(n);
  for (double& v : c) v = mean(rng);
  KForm canonical = KForm::constant(domain, n - 1, c);
  canonical += perturbation * exteriorDerivative(randomForm(domain, n - 2, rng, 2));
  VectorField x = fluxField(canonical, omega);
  return Scenario{std::move(g), std::move(x), std::move(omega), {}};
}

}  // namespace xsect::forms
