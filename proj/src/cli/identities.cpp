#include "xsect/cli/identities.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <random>

#include "xsect/error.hpp"
#include "xsect/forms/operators.hpp"
#include "xsect/forms/random.hpp"
#include "xsect/projection/hodge_projection.hpp"
#include "xsect/projection/homotopy.hpp"

namespace xsect::cli {

using forms::KForm;
using forms::MetricField;

namespace {

constexpr double kBoundSlack = 0.05;

double maxAbsDiff(const KForm& a, const KForm& b) {
  double m = 0.0;
  for (std::size_t c = 0; c < a.componentCount(); ++c)
    for (std::size_t i = 0; i < a.component(c).size(); ++i)
      m = std::max(m, std::abs(a.component(c)[i] - b.component(c)[i]));
  return m;
}

class Collector {
 public:
  IdentityResult& add(const std::string& name, double tolerance) {
    results_.push_back(IdentityResult{name, 0, 0.0, tolerance, true});
    return results_.back();
  }
  IdentityResult& get(const std::string& name) {
    for (auto& r : results_)
      if (r.name == name) return r;
    throw Error("unknown identity " + name);
  }
  void record(const std::string& name, double residual) {
    auto& r = get(name);
    r.residual = r.samples == 0 ? residual : std::max(r.residual, residual);
    ++r.samples;
  }
  std::vector<IdentityResult> finish() {
    for (auto& r : results_) r.passed = r.samples > 0 && r.residual <= r.tolerance;
    return std::move(results_);
  }

 private:
  std::vector<IdentityResult> results_;
};

projection::BoxChart chartFor(int n, int index) {
  projection::BoxChart c;
  c.dim = n;
  const double extent = n == 2 ? 0.4 : 0.3;
  for (int a = 0; a < n; ++a) {
    // Spread the boxes around the torus; some straddle the seam.
    c.lower[a] = std::fmod(0.17 * (index + 1) + 0.29 * a, 1.0);
    c.upper[a] = c.lower[a] + extent;
  }
  c.nodes = n == 2 ? 20 : 12;
  return c;
}

}  // namespace

bool IdentitySuiteReport::passed() const {
  return !results.empty() && std::all_of(results.begin(), results.end(), [](const auto& r) { return r.passed; });
}

const IdentityResult& IdentitySuiteReport::result(const std::string& name) const {
  for (const auto& r : results)
    if (r.name == name) return r;
  throw Error("unknown identity " + name);
}

IdentitySuiteReport runIdentitySuite(const forms::Scenario& s, int randomForms, std::uint64_t seed) {
  const auto start = std::chrono::steady_clock::now();
  const int n = s.dim();
  const auto& domain = s.domain();
  const MetricField& g = s.metric;
  const MetricField flatMetric = MetricField::flat(domain);
  std::mt19937_64 rng(seed);

  Collector c;
  c.add("star_star_sign", 1e-10);
  c.add("star_isometry", 1e-9);
  c.add("d_d_zero", 1e-9);
  c.add("star_interior_flat", 1e-9);
  c.add("norm_chain", 1e-9);
  c.add("norm_chain_scenario", 1e-8);
  c.add("homotopy_formula", 1e-6);
  c.add("homotopy_norm", 1e-6);
  c.add("proposition_bound", 1e-12);
  c.add("projection_closed", 1e-9);
  c.add("projection_idempotent", 1e-10);

  // Metric identities: forms of every degree in turn.
  for (int i = 0; i < randomForms; ++i) {
    const int k = i % (n + 1);
    const KForm w = forms::randomForm(domain, k, rng, 3);
    const double scale = std::max(1.0, w.maxAbsCoefficient());
    const KForm star = forms::hodgeStar(w, g);
    const double sign = (k * (n - k)) % 2 == 0 ? 1.0 : -1.0;
    c.record("star_star_sign", maxAbsDiff(forms::hodgeStar(star, g), sign * w) / scale);
    if (k == 1 || k == n - 1) {
      const double a = forms::supNorm(w, g);
      c.record("star_isometry", std::abs(forms::supNorm(star, g) - a) / std::max(1.0, a));
    }
    if (k + 2 <= n) {
      c.record("d_d_zero", forms::exteriorDerivative(forms::exteriorDerivative(w)).maxAbsCoefficient() / scale);
    }
    // Projection identities on every other 1-form.
    if (k == 1 && (i / (n + 1)) % 2 == 0) {
      const auto p = projection::hodgeClosedProjection(w, g);
      c.record("proposition_bound", p.distance - p.dBound * (1.0 + kBoundSlack));
      c.record("projection_closed", forms::exteriorDerivative(p.omega).maxAbsCoefficient() / scale);
      c.record("projection_idempotent", maxAbsDiff(projection::hodgeClosedProjection(p.omega).omega, p.omega) / scale);
    }
  }

  // Interior product identities on random fields and on the scenario field.
  const KForm vol = forms::riemannianVolume(g);
  const double sign = n % 2 == 1 ? 1.0 : -1.0;
  const int fieldCount = std::max(1, randomForms / 10);
  for (int i = 0; i <= fieldCount; ++i) {
    const forms::VectorField x = i == 0 ? s.x : forms::randomVectorField(domain, rng, 3);
    const KForm beta = forms::interiorProduct(x, vol);
    const KForm theta = forms::flat(x, g);
    c.record("star_interior_flat",
             maxAbsDiff(forms::hodgeStar(beta, g), sign * theta) / std::max(1.0, theta.maxAbsCoefficient()));
    const double rhs = forms::supNorm(forms::exteriorDerivative(theta), g);
    const double lhs = forms::supNorm(forms::codifferential(beta, g), g);
    c.record("norm_chain", std::abs(lhs - rhs) / std::max(1.0, rhs));
  }
  {
    const KForm beta = forms::interiorProduct(s.x, s.omega);
    const double rhs = forms::supNorm(forms::exteriorDerivative(forms::flat(s.x, g)), g);
    const double lhs = forms::supNorm(forms::codifferential(beta, g), g);
    c.record("norm_chain_scenario", std::abs(lhs - rhs) / std::max(1.0, rhs));
  }
  {
    const KForm theta = forms::flat(s.x, g);
    const auto p = projection::hodgeClosedProjection(theta, g);
    c.record("proposition_bound", p.distance - p.dBound * (1.0 + kBoundSlack));
  }

  // Chart identities on a coarse grid; charts are independent of the scenario grid.
  const auto coarse = n == 2 ? forms::TorusDomain::square(16) : forms::TorusDomain::cube(12);
  const int chartCount = std::max(1, randomForms / 10);
  for (int i = 0; i < chartCount; ++i) {
    const int k = 1 + i % n;
    const KForm xi = forms::randomForm(coarse, k, rng, 2);
    const auto chart = chartFor(n, i);
    forms::Point center{0.0, 0.0, 0.0};
    for (int a = 0; a < n; ++a) center[a] = 0.5 * (chart.lower[a] + chart.upper[a]);
    const auto r = projection::verifyHomotopyFormula(xi, chart, center, 16);
    c.record("homotopy_formula", r.residual / std::max(1.0, r.xiNorm));
  }

  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int i = 0; i < 2 * randomForms; ++i) {
    projection::BoxChart chart;
    chart.dim = 2 + i % 2;
    for (int a = 0; a < chart.dim; ++a) {
      chart.lower[a] = 0.1 * (a + 1);
      chart.upper[a] = chart.lower[a] + 0.4;
    }
    chart.nodes = 4;
    const int degree = 1 + i % (chart.dim + 1);
    projection::ProductForm w(chart, projection::Quadrature::gaussLegendre(5), degree);
    for (auto& comp : w.components)
      for (double& v : comp) v = u(rng);
    const auto cyl = projection::cylinderDecompose(w);
    const double norm = cyl.supNorm();
    if (norm > 0.0) c.record("homotopy_norm", projection::homotopyOperator(cyl).supNorm() / norm - 1.0);
  }

  IdentitySuiteReport report;
  report.randomForms = randomForms;
  report.results = c.finish();
  report.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return report;
}

}  // namespace xsect::cli
