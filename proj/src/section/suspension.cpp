#include "xsect/section/suspension.hpp"

#include <cmath>
#include <string>

#include "xsect/error.hpp"
#include "xsect/forms/operators.hpp"

namespace xsect::section {

using forms::Point;

namespace {

double wrapHalf(double d) { return d - std::round(d); }

}  // namespace

Suspension suspend(const SuspensionSpec& spec, int resolution) {
  const int m = spec.baseDim;
  if (m != 1 && m != 2) throw Error("suspension base dimension must be 1 or 2");
  if (!spec.baseMap || !spec.roof) throw Error("suspension needs a base map and a roof");
  const int n = m + 1;
  const auto domain = forms::TorusDomain(n, {resolution, resolution, n == 3 ? resolution : 1});

  // Sample the base map on the base grid and require a constant displacement.
  std::vector<double> alpha(m, 0.0);
  bool first = true;
  const int baseCount = m == 1 ? resolution : resolution * resolution;
  for (int b = 0; b < baseCount; ++b) {
    Point y{0.0, 0.0, 0.0};
    y[0] = static_cast<double>(m == 1 ? b : b / resolution) / resolution;
    if (m == 2) y[1] = static_cast<double>(b % resolution) / resolution;
    const Point image = spec.baseMap(y);
    for (int i = 0; i < m; ++i) {
      const double d = wrapHalf(image[i] - y[i]);
      if (first) {
        alpha[i] = d;
      } else if (std::abs(wrapHalf(d - alpha[i])) > 1e-12) {
        throw Error("base map must be a translation");
      }
    }
    first = false;
    const double r = spec.roof(y);
    if (!(r > 0.0)) throw Error("roof must be positive");
  }
  // Keep the translation in [0, 1).
  for (double& a : alpha) a = forms::wrapUnit(a);

  auto roofAt = [&](const Point& p) {
    Point y{0.0, 0.0, 0.0};
    for (int i = 0; i < m; ++i) y[i] = p[i + 1];
    return spec.roof(y);
  };

  Eigen::Vector3d u = Eigen::Vector3d::Zero();
  u(0) = 1.0;
  for (int i = 0; i < m; ++i) u(i + 1) = alpha[i];
  u /= u.norm();

  const double power = 1.0 / static_cast<double>(n - 1);
  std::vector<double> entries(domain.size() * n * n);
  for (std::size_t p = 0; p < domain.size(); ++p) {
    const double r = roofAt(domain.point(p));
    const double transverse = std::pow(r, power);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        const double uu = u(i) * u(j);
        entries[(p * n + i) * n + j] = r * uu + transverse * ((i == j ? 1.0 : 0.0) - uu);
      }
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) {
        const double avg = 0.5 * (entries[(p * n + i) * n + j] + entries[(p * n + j) * n + i]);
        entries[(p * n + i) * n + j] = avg;
        entries[(p * n + j) * n + i] = avg;
      }
  }
  forms::MetricField g(domain, std::move(entries));

  forms::VectorField x = forms::VectorField::fromFunction(domain, [&](const Point& p) {
    const double r = roofAt(p);
    Point v{1.0 / r, 0.0, 0.0};
    for (int i = 0; i < m; ++i) v[i + 1] = alpha[i] / r;
    return v;
  });
  forms::KForm omega = forms::riemannianVolume(g);
  return Suspension{forms::Scenario{std::move(g), std::move(x), std::move(omega), {}}, alpha};
}

}  // namespace xsect::section
