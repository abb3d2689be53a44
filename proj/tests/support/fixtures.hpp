#pragma once

// Shared test scenarios.
//
//   A        T^2, flat, X = (1, 0)
//   B        T^2, flat, X = (1, 0.5 + 0.05 sin 2 pi x)
//   C-flat   T^3, flat, X = (cos 2 pi z, sin 2 pi z, 0)
//   C-scaled T^3, g = diag(1, 1, 4 pi^2), same X, so g(X, X) = 1

#include <cmath>
#include <numbers>

#include "xsect/forms/operators.hpp"
#include "xsect/forms/scenario.hpp"

namespace xsect::testing {

using forms::KForm;
using forms::MetricField;
using forms::Point;
using forms::Scenario;
using forms::ScalarField;
using forms::TorusDomain;
using forms::VectorField;

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

inline Scenario makeScenario(MetricField g, VectorField x) {
  KForm omega = forms::riemannianVolume(g);
  return Scenario{std::move(g), std::move(x), std::move(omega), {}};
}

inline Scenario fixtureA(int n = 128) {
  const auto d = TorusDomain::square(n);
  const double x[] = {1.0, 0.0};
  return makeScenario(MetricField::flat(d), VectorField::constant(d, x));
}

inline VectorField fixtureBField(const TorusDomain& d) {
  return VectorField::fromFunction(d, [](const Point& p) {
    return Point{1.0, 0.5 + 0.05 * std::sin(kTwoPi * p[0]), 0.0};
  });
}

inline Scenario fixtureB(int n = 128) {
  const auto d = TorusDomain::square(n);
  return makeScenario(MetricField::flat(d), fixtureBField(d));
}

inline VectorField fixtureCField(const TorusDomain& d) {
  return VectorField::fromFunction(d, [](const Point& p) {
    return Point{std::cos(kTwoPi * p[2]), std::sin(kTwoPi * p[2]), 0.0};
  });
}

inline Scenario fixtureCFlat(int n = 64) {
  const auto d = TorusDomain::cube(n);
  return makeScenario(MetricField::flat(d), fixtureCField(d));
}

inline Scenario fixtureCScaled(int n = 64) {
  const auto d = TorusDomain::cube(n);
  const double diag[] = {1.0, 1.0, kTwoPi * kTwoPi};
  return makeScenario(MetricField::diagonal(d, diag), fixtureCField(d));
}

inline double maxAbsDiff(const ScalarField& a, const ScalarField& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

inline double maxAbsDiff(const KForm& a, const KForm& b) {
  double m = 0.0;
  for (std::size_t c = 0; c < a.componentCount(); ++c) {
    m = std::max(m, maxAbsDiff(a.component(c), b.component(c)));
  }
  return m;
}

}  // namespace xsect::testing
