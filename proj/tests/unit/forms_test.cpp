#include <doctest.h>

#include <random>

#include "support/fixtures.hpp"
#include "xsect/error.hpp"
#include "xsect/forms/random.hpp"
#include "xsect/forms/spectral.hpp"

using namespace xsect::forms;
using namespace xsect::testing;

namespace {

ScalarField field(const TorusDomain& d, double (*fn)(const Point&)) {
  return ScalarField::fromFunction(d, fn);
}

}  // namespace

TEST_CASE("domain rejects odd or tiny grids") {
  CHECK_THROWS_AS(TorusDomain(2, {7, 8, 1}), xsect::Error);
  CHECK_THROWS_AS(TorusDomain(2, {6, 6, 1}), xsect::Error);
  CHECK_THROWS_AS(TorusDomain(4, {8, 8, 8}), xsect::Error);
  const TorusDomain d(3, {8, 10, 12});
  CHECK(d.size() == 960);
  for (std::size_t p : {0ul, 17ul, 959ul}) CHECK(d.flatten(d.unflatten(p)) == p);
}

TEST_CASE("multi-index tables") {
  CHECK(multiIndices(3, 2) == std::vector<std::vector<int>>{{0, 1}, {0, 2}, {1, 2}});
  std::vector<int> idx{2, 0, 1};
  CHECK(sortWithSign(idx) == 1);
  idx = {1, 0};
  CHECK(sortWithSign(idx) == -1);
  idx = {1, 1};
  CHECK(sortWithSign(idx) == 0);
}

TEST_CASE("trigonometric interpolant reproduces band-limited fields off-grid") {
  const auto d = TorusDomain(3, {16, 12, 10});
  std::mt19937_64 rng(11);
  const auto f = randomBandLimitedField(d, rng, 3);
  const TrigInterpolant interp(f);
  for (std::size_t p = 0; p < d.size(); p += 97) {
    CHECK(std::abs(interp.value(d.point(p)) - f[p]) < 1e-12);
  }
  // Off-grid: compare with a second grid sampling the same polynomial.
  std::mt19937_64 rng2(11);
  const auto fine = randomBandLimitedField(TorusDomain(3, {32, 24, 20}), rng2, 3);
  const TorusDomain fd(3, {32, 24, 20});
  double err = 0.0;
  for (std::size_t p = 0; p < fd.size(); p += 13) err = std::max(err, std::abs(interp.value(fd.point(p)) - fine[p]));
  CHECK(err < 1e-12);

  const auto s = ScalarField::fromFunction(TorusDomain::square(32), [](const Point& x) {
    return std::sin(kTwoPi * x[0]) * std::cos(2 * kTwoPi * x[1]);
  });
  const TrigInterpolant si(s);
  std::array<double, 3> grad{};
  const Point q{0.123, 0.456, 0};
  const double v = si.valueAndGradient(q, grad);
  CHECK(v == doctest::Approx(std::sin(kTwoPi * q[0]) * std::cos(2 * kTwoPi * q[1])).epsilon(1e-12));
  CHECK(grad[0] == doctest::Approx(kTwoPi * std::cos(kTwoPi * q[0]) * std::cos(2 * kTwoPi * q[1])).epsilon(1e-12));
  CHECK(grad[1] == doctest::Approx(-2 * kTwoPi * std::sin(kTwoPi * q[0]) * std::sin(2 * kTwoPi * q[1])).epsilon(1e-12));
  CHECK(si.modeCount() <= 4);
}

TEST_CASE("exteriorDerivative") {
  const auto d = TorusDomain::square(128);

  SUBCASE("constant 0-form is killed") {
    const KForm f = KForm::constant(d, 0, std::vector<double>{3.5});
    CHECK(exteriorDerivative(f).maxAbsCoefficient() < 1e-14);
  }

  SUBCASE("d(dx + (0.5 + 0.05 sin 2 pi x) dy) = 0.1 pi cos(2 pi x) dx^dy") {
    KForm theta(d, 1);
    theta.component(0) = ScalarField(d, 1.0);
    theta.component(1) = field(d, [](const Point& p) { return 0.5 + 0.05 * std::sin(kTwoPi * p[0]); });
    const KForm dtheta = exteriorDerivative(theta);
    const auto expected = field(d, [](const Point& p) { return 0.1 * kPi * std::cos(kTwoPi * p[0]); });
    CHECK(maxAbsDiff(dtheta.component(0), expected) < 1e-12);
  }

  SUBCASE("d d sin(2 pi y) = 0") {
    KForm f(d, 0);
    f.component(0) = field(d, [](const Point& p) { return std::sin(kTwoPi * p[1]); });
    CHECK(exteriorDerivative(exteriorDerivative(f)).maxAbsCoefficient() < 1e-10);
  }

  SUBCASE("top degree is an error") {
    CHECK_THROWS_WITH_AS(exteriorDerivative(KForm(d, 2)), "top-degree form", xsect::Error);
  }
}

TEST_CASE("hodgeStar") {
  SUBCASE("*dx = dy on flat T^2") {
    const auto d = TorusDomain::square(16);
    const KForm dx = KForm::constant(d, 1, std::vector<double>{1.0, 0.0});
    const KForm star = hodgeStar(dx, MetricField::flat(d));
    CHECK(star.component(0).maxAbs() < 1e-15);
    CHECK(maxAbsDiff(star.component(1), ScalarField(d, 1.0)) < 1e-15);
  }

  SUBCASE("star(i_X Omega) = (-1)^(n-1) X^flat on the fixtures") {
    for (const auto& s : {fixtureA(32), fixtureB(32), fixtureCFlat(16), fixtureCScaled(16)}) {
      const KForm lhs = hodgeStar(interiorProduct(s.x, s.omega), s.metric);
      KForm rhs = flat(s.x, s.metric);
      if (s.dim() % 2 == 0) rhs *= -1.0;
      CHECK(maxAbsDiff(lhs, rhs) < 1e-9);
    }
  }

  SUBCASE("** = +1 on 1-forms in T^3") {
    const auto d = TorusDomain::cube(16);
    std::mt19937_64 rng(3);
    const KForm w = randomForm(d, 1, rng);
    const auto g = MetricField::flat(d);
    CHECK(maxAbsDiff(hodgeStar(hodgeStar(w, g), g), w) < 1e-12);
  }

  SUBCASE("non-SPD metric is rejected") {
    const auto d = TorusDomain::square(8);
    const double diag[] = {1.0, -1.0};
    const auto g = MetricField::diagonal(d, diag);
    CHECK_THROWS_AS(hodgeStar(KForm(d, 1), g), xsect::Error);
    CHECK_THROWS_AS(g.checkPositiveDefinite(), xsect::Error);
  }
}

TEST_CASE("codifferential") {
  SUBCASE("X = (1, 0) flat gives zero") {
    const auto s = fixtureA(32);
    CHECK(codifferential(interiorProduct(s.x, s.omega), s.metric).maxAbsCoefficient() < 1e-14);
  }
  SUBCASE("Fixture B: sup norm 0.1 pi") {
    const auto s = fixtureB();
    CHECK(supNorm(codifferential(interiorProduct(s.x, s.omega), s.metric), s.metric) ==
          doctest::Approx(0.1 * kPi).epsilon(1e-12));
  }
  SUBCASE("Fixture C-scaled: sup norm 1") {
    const auto s = fixtureCScaled(32);
    CHECK(std::abs(supNorm(codifferential(interiorProduct(s.x, s.omega), s.metric), s.metric) - 1.0) < 1e-8);
  }
  SUBCASE("degree 0 is an error") {
    const auto d = TorusDomain::square(8);
    CHECK_THROWS_AS(codifferential(KForm(d, 0), MetricField::flat(d)), xsect::Error);
  }
}

TEST_CASE("interiorProduct") {
  const auto d2 = TorusDomain::square(32);
  const KForm area = KForm::constant(d2, 2, std::vector<double>{1.0});

  SUBCASE("i_(1,0) dx^dy = dy") {
    const double x[] = {1.0, 0.0};
    const KForm r = interiorProduct(VectorField::constant(d2, x), area);
    CHECK(r.component(0).maxAbs() < 1e-15);
    CHECK(maxAbsDiff(r.component(1), ScalarField(d2, 1.0)) < 1e-15);
  }

  SUBCASE("i_X dx^dy = X1 dy - X2 dx") {
    const auto x = fixtureBField(d2);
    const KForm r = interiorProduct(x, area);
    CHECK(maxAbsDiff(r.component(1), x[0]) < 1e-15);
    CHECK(maxAbsDiff(r.component(0), -1.0 * x[1]) < 1e-15);
  }

  SUBCASE("3D: i_X dx^dy^dz = cos dy^dz - sin dx^dz") {
    const auto d3 = TorusDomain::cube(16);
    const auto x = fixtureCField(d3);
    const KForm r = interiorProduct(x, KForm::constant(d3, 3, std::vector<double>{1.0}));
    CHECK(r.component({0, 1}).maxAbs() < 1e-15);
    CHECK(maxAbsDiff(r.component({1, 2}), x[0]) < 1e-15);
    CHECK(maxAbsDiff(r.component({0, 2}), -1.0 * x[1]) < 1e-15);
  }

  SUBCASE("degree 0 is an error") {
    const double x[] = {1.0, 0.0};
    CHECK_THROWS_AS(interiorProduct(VectorField::constant(d2, x), KForm(d2, 0)), xsect::Error);
  }
}

TEST_CASE("flat and pair") {
  const auto d = TorusDomain::square(32);
  const double e1[] = {1.0, 0.0};
  const auto x1 = VectorField::constant(d, e1);

  CHECK(maxAbsDiff(flat(x1, MetricField::flat(d)), KForm::constant(d, 1, std::vector<double>{1.0, 0.0})) == 0.0);
  const double diag[] = {4.0, 1.0};
  CHECK(maxAbsDiff(flat(x1, MetricField::diagonal(d, diag)),
                   KForm::constant(d, 1, std::vector<double>{4.0, 0.0})) == 0.0);
  const auto xb = fixtureBField(d);
  const KForm thetaB = flat(xb, MetricField::flat(d));
  CHECK(maxAbsDiff(thetaB.component(1), xb[1]) == 0.0);

  const KForm dx = KForm::constant(d, 1, std::vector<double>{1.0, 0.0});
  CHECK(maxAbsDiff(pair(dx, x1), ScalarField(d, 1.0)) == 0.0);
  const KForm w = KForm::constant(d, 1, std::vector<double>{1.0, 0.5});
  const auto expected = field(d, [](const Point& p) { return 1.25 + 0.025 * std::sin(kTwoPi * p[0]); });
  CHECK(maxAbsDiff(pair(w, xb), expected) < 1e-15);
  CHECK(pair(KForm(d, 1), xb).maxAbs() == 0.0);
}

TEST_CASE("supNorm") {
  const auto d = TorusDomain::square(16);
  const KForm dx = KForm::constant(d, 1, std::vector<double>{1.0, 0.0});
  CHECK(supNorm(dx, MetricField::flat(d)) == doctest::Approx(1.0));
  const double diag[] = {4.0, 1.0};
  // max dx(v) over g-unit v is 1 / sqrt(g_11).
  CHECK(supNorm(dx, MetricField::diagonal(d, diag)) == doctest::Approx(0.5).epsilon(1e-15));

  const auto c = fixtureCFlat(32);
  CHECK(supNorm(exteriorDerivative(flat(c.x, c.metric)), c.metric) == doctest::Approx(kTwoPi).epsilon(1e-12));

  SUBCASE("2-form norm in T^3 matches brute-force maximization") {
    // Oracle: maximize w(u, v) over g-unit u, v by dense sampling of the sphere.
    const auto d3 = TorusDomain::cube(8);
    SmallMatrix g(3, 3);
    g << 2.0, 0.3, 0.1, 0.3, 1.0, -0.2, 0.1, -0.2, 1.5;
    const auto metric = MetricField::constant(d3, g);
    const double coeffs[] = {0.7, -1.1, 0.4};
    const KForm w = KForm::constant(d3, 2, coeffs);
    Eigen::Matrix3d a;
    a << 0, 0.7, -1.1, -0.7, 0, 0.4, 1.1, -0.4, 0;
    Eigen::LLT<Eigen::Matrix3d> llt(g);
    const Eigen::Matrix3d linv = llt.matrixL().solve(Eigen::Matrix3d::Identity());
    // Unit u in the g-metric is u = L^{-T} e with |e| = 1.
    double best = 0.0;
    const int steps = 60;
    std::vector<Eigen::Vector3d> sphere;
    for (int i = 0; i <= steps; ++i) {
      for (int j = 0; j < 2 * steps; ++j) {
        const double th = kPi * i / steps, ph = kPi * j / steps;
        sphere.emplace_back(std::sin(th) * std::cos(ph), std::sin(th) * std::sin(ph), std::cos(th));
      }
    }
    const Eigen::Matrix3d b = linv * a * linv.transpose();
    for (const auto& e : sphere) best = std::max(best, (b * e).norm());
    CHECK(supNorm(w, metric) == doctest::Approx(best).epsilon(2e-3));
  }
}

TEST_CASE("minSpeed") {
  const double e1[] = {1.0, 0.0};
  const auto d = TorusDomain::square(128);
  CHECK(minSpeed(VectorField::constant(d, e1), MetricField::flat(d)).m == doctest::Approx(1.0));
  const auto b = fixtureB();
  // Grid scan oracle: 1 + (0.5 + 0.05 s)^2 with s = -1 reached at j = 96.
  double scan = 1e9;
  for (int j = 0; j < 128; ++j) {
    const double s = std::sin(kTwoPi * j / 128.0);
    scan = std::min(scan, 1.0 + (0.5 + 0.05 * s) * (0.5 + 0.05 * s));
  }
  CHECK(scan == doctest::Approx(1.2025).epsilon(1e-15));
  CHECK(minSpeed(b.x, b.metric).mSquared == doctest::Approx(scan).epsilon(1e-15));
  const auto c = fixtureCScaled(16);
  CHECK(minSpeed(c.x, c.metric).mSquared == doctest::Approx(1.0).epsilon(1e-14));

  const double zero[] = {0.0, 0.0};
  CHECK_THROWS_AS(minSpeed(VectorField::constant(d, zero), MetricField::flat(d)), xsect::Error);
}

TEST_CASE("riemannianVolume") {
  const auto d2 = TorusDomain::square(8);
  CHECK(riemannianVolume(MetricField::flat(d2)).component(0).min() == doctest::Approx(1.0));
  const double diag2[] = {4.0, 1.0};
  CHECK(riemannianVolume(MetricField::diagonal(d2, diag2)).component(0).max() == doctest::Approx(2.0));
  const double diag3[] = {1.0, 1.0, kTwoPi * kTwoPi};
  CHECK(riemannianVolume(MetricField::diagonal(TorusDomain::cube(8), diag3)).component(0).max() ==
        doctest::Approx(kTwoPi).epsilon(1e-15));
}

TEST_CASE("laplaceBeltrami") {
  const auto d = TorusDomain::square(32);
  const KForm dx = KForm::constant(d, 1, std::vector<double>{1.0, 0.0});
  CHECK(laplaceBeltrami(dx, MetricField::flat(d)).maxAbsCoefficient() < 1e-13);

  const auto a = fixtureA(32);
  CHECK(supNorm(laplaceBeltrami(interiorProduct(a.x, a.omega), a.metric), a.metric) < 1e-13);

  // i_X Omega = cos dy^dz - sin dx^dz is closed; Delta = d delta has norm (2 pi)^2.
  const auto c = fixtureCFlat(32);
  CHECK(supNorm(laplaceBeltrami(interiorProduct(c.x, c.omega), c.metric), c.metric) ==
        doctest::Approx(kTwoPi * kTwoPi).epsilon(1e-10));
}

TEST_CASE("validateScenario") {
  const auto a = validateScenario(fixtureA(32));
  CHECK(a.ok());
  CHECK(a.check("canonical_form_closed").residual < 1e-15);
  CHECK(a.check("omega_is_riemannian_volume").residual == 0.0);

  const auto b = fixtureB(64);
  CHECK(validateScenario(b).ok());
  CHECK(validateScenario(b).check("canonical_form_closed").residual < 1e-12);

  auto bad = fixtureB(64);
  bad.omega *= 2.0;
  const auto report = validateScenario(bad);
  CHECK_FALSE(report.ok());
  CHECK_FALSE(report.check("omega_is_riemannian_volume").passed);
  CHECK(report.check("omega_is_riemannian_volume").residual == doctest::Approx(1.0));
  CHECK(report.check("canonical_form_closed").passed);

  // A compressible field fails the closedness check.
  auto comp = fixtureA(32);
  comp.x = VectorField::fromFunction(comp.domain(), [](const Point& p) {
    return Point{1.0 + 0.1 * std::sin(kTwoPi * p[0]), 0.0, 0.0};
  });
  CHECK_FALSE(validateScenario(comp).check("canonical_form_closed").passed);
}

TEST_CASE("property: d d = 0, ** sign, star isometry, norm chain on random SPD metrics") {
  std::mt19937_64 rng(2024);
  for (int n : {2, 3}) {
    const auto d = n == 2 ? TorusDomain::square(32) : TorusDomain::cube(16);
    for (int trial = 0; trial < 3; ++trial) {
      const auto g = randomSpdMetric(d, rng);
      CHECK(g.minEigenvalue() > 0.0);
      for (int k = 0; k <= n; ++k) {
        const KForm w = randomForm(d, k, rng);
        const double sign = (k * (n - k)) % 2 == 0 ? 1.0 : -1.0;
        CHECK(maxAbsDiff(hodgeStar(hodgeStar(w, g), g), sign * w) <= 1e-10 * std::max(1.0, w.maxAbsCoefficient()));
        if (k + 2 <= n) {
          const double dd = supNorm(exteriorDerivative(exteriorDerivative(w)), MetricField::flat(d));
          CHECK(dd <= 1e-9 * w.maxAbsCoefficient() * d.maxResolution() * d.maxResolution());
        }
        if (k == 1 || k == n - 1) {
          CHECK(std::abs(supNorm(hodgeStar(w, g), g) - supNorm(w, g)) <= 1e-9);
        }
      }
      // Norm chain: |delta_g(i_X Omega)| = |d X^flat| when Omega is the g-volume.
      const auto x = randomVectorField(d, rng);
      const KForm omega = riemannianVolume(g);
      const double lhs = supNorm(codifferential(interiorProduct(x, omega), g), g);
      const double rhs = supNorm(exteriorDerivative(flat(x, g)), g);
      CHECK(std::abs(lhs - rhs) <= 1e-9 * std::max(1.0, rhs));
    }
  }
}

TEST_CASE("flux field inverts the interior product") {
  std::mt19937_64 rng(5);
  for (int dim : {2, 3}) {
    const auto d = dim == 2 ? TorusDomain::square(16) : TorusDomain::cube(8);
    const Scenario s = randomScenario(d, rng);
    CHECK(validateScenario(s).ok());
    const KForm canonical = interiorProduct(s.x, s.omega);
    const VectorField back = fluxField(canonical, s.omega);
    double err = 0.0;
    for (int i = 0; i < dim; ++i) err = std::max(err, maxAbsDiff(back[i], s.x[i]));
    CHECK(err <= 1e-13);
  }
}
