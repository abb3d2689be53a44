#include <doctest.h>

#include <random>

#include "support/fixtures.hpp"
#include "xsect/criterion/criterion.hpp"
#include "xsect/criterion/honda.hpp"
#include "xsect/forms/random.hpp"

using namespace xsect;
using namespace xsect::criterion;
using namespace xsect::testing;

namespace {

Scenario scaled(const Scenario& s, double c) {
  VectorField x = s.x;
  x *= c;
  return Scenario{s.metric, std::move(x), s.omega, s.tol};
}

SectionSample sample2d(Point p, Point normal) {
  const double len = std::hypot(normal[0], normal[1]);
  SectionSample s;
  s.point = p;
  s.normal = {normal[0] / len, normal[1] / len, 0.0};
  // det[n, t] > 0 for t = (-n_y, n_x).
  s.tangents[0] = {-s.normal[1], s.normal[0], 0.0};
  return s;
}

}  // namespace

TEST_CASE("criterion on fixture A") {
  const auto r = checkCriterion(fixtureA());
  CHECK(r.deltaNorm <= 1e-12);
  CHECK(r.mSquared == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(r.margin == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(r.verdict == Verdict::Pass);
  CHECK(std::string(verdictName(r.verdict)) == "PASS");
}

TEST_CASE("criterion on fixture B") {
  const auto r = checkCriterion(fixtureB());
  // delta(i_X Omega) = d/dx X_2 = 0.1 pi cos 2 pi x; g(X, X) >= 1 + 0.45^2.
  CHECK(r.deltaNorm == doctest::Approx(0.1 * kPi).epsilon(1e-10));
  CHECK(r.mSquared == doctest::Approx(1.2025).epsilon(1e-12));
  CHECK(r.margin == doctest::Approx(1.2025 - 0.1 * kPi).epsilon(1e-10));
  CHECK(std::abs(r.margin - 0.88834) <= 1e-3);
  CHECK(r.verdict == Verdict::Pass);
  CHECK(r.normChainResidual <= 1e-8);
}

TEST_CASE("criterion on fixture C") {
  SUBCASE("scaled metric sits on the boundary") {
    const auto r = checkCriterion(fixtureCScaled());
    CHECK(r.deltaNorm == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(r.mSquared == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(r.verdict == Verdict::Fail);
    CHECK(r.normChainResidual <= 1e-8);
  }
  SUBCASE("flat metric") {
    const auto r = checkCriterion(fixtureCFlat());
    CHECK(r.deltaNorm == doctest::Approx(kTwoPi).epsilon(1e-10));
    CHECK(r.mSquared == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(r.verdict == Verdict::Fail);
    CHECK(r.normChainResidual <= 1e-8);
  }
}

TEST_CASE("invalid scenarios are rejected") {
  Scenario s = fixtureA(32);
  s.omega *= 2.0;
  CHECK_THROWS_AS(checkCriterion(s), InvalidScenario);
  try {
    checkCriterion(s);
  } catch (const InvalidScenario& e) {
    CHECK_FALSE(e.report().check("omega_is_riemannian_volume").passed);
    CHECK(std::string(e.what()).find("omega_is_riemannian_volume") != std::string::npos);
  }

  const auto d = TorusDomain::square(32);
  const Scenario compressible = makeScenario(MetricField::flat(d), VectorField::fromFunction(d, [](const Point& p) {
                                               return Point{1.0 + 0.3 * std::sin(kTwoPi * p[0]), 0.0, 0.0};
                                             }));
  CHECK_THROWS_AS(checkCriterion(compressible), InvalidScenario);
}

TEST_CASE("closed one-form construction") {
  SUBCASE("fixture A") {
    const auto c = buildClosedOneForm(fixtureA());
    CHECK(c.accepted);
    CHECK(c.minPairing == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(c.distance <= 1e-14);
  }
  SUBCASE("fixture B") {
    const Scenario s = fixtureB();
    const auto c = buildClosedOneForm(s);
    CHECK(c.accepted);
    const double coeffs[] = {1.0, 0.5};
    CHECK(maxAbsDiff(c.omega, KForm::constant(s.domain(), 1, coeffs)) <= 1e-12);
    // omega(X) = 1.25 + 0.025 sin 2 pi x.
    CHECK(c.minPairing == doctest::Approx(1.225).epsilon(1e-12));
    CHECK(c.worstPoint[0] == doctest::Approx(0.75));
    CHECK(c.lowerBoundCheck == doctest::Approx(1.2025 - 0.05).epsilon(1e-10));
    CHECK(c.minPairing >= c.lowerBoundCheck);
    CHECK(c.minPairing >= c.pointwiseChainBound);
    CHECK(c.failure.empty());
  }
  SUBCASE("fixture C fails") {
    for (const Scenario& s : {fixtureCFlat(32), fixtureCScaled(32)}) {
      const auto c = buildClosedOneForm(s);
      CHECK_FALSE(c.accepted);
      CHECK(c.omega.maxAbsCoefficient() <= 1e-8);
      CHECK(std::abs(c.minPairing) <= 1e-8);
      CHECK_FALSE(c.failure.empty());
    }
  }
}

TEST_CASE("harmonicity certificate") {
  const auto a = harmonicityCertificate(fixtureA());
  CHECK(a.harmonic);
  CHECK(a.closedNorm <= 1e-12);
  CHECK(a.coclosedNorm <= 1e-12);

  const auto b = harmonicityCertificate(fixtureB());
  CHECK(b.closed);
  CHECK_FALSE(b.coclosed);
  CHECK(b.coclosedNorm == doctest::Approx(0.1 * kPi).epsilon(1e-10));

  const auto c = harmonicityCertificate(fixtureCFlat(32));
  CHECK(c.closed);
  CHECK_FALSE(c.harmonic);
  CHECK(c.coclosedNorm == doctest::Approx(kTwoPi).epsilon(1e-10));
}

TEST_CASE("honda check") {
  const Scenario a = fixtureA(32);
  SUBCASE("{x = 0} is transverse") {
    std::vector<SectionSample> samples;
    for (int j = 0; j < 16; ++j) samples.push_back(sample2d({0.0, j / 16.0, 0.0}, {1.0, 0.0, 0.0}));
    const auto r = hondaCheck(samples, a);
    CHECK(r.passed);
    CHECK(r.minAbsValue == doctest::Approx(1.0).epsilon(1e-12));
  }
  SUBCASE("{y = 0} is tangent to the flow") {
    std::vector<SectionSample> samples;
    for (int j = 0; j < 16; ++j) samples.push_back(sample2d({j / 16.0, 0.0, 0.0}, {0.0, 1.0, 0.0}));
    const auto r = hondaCheck(samples, a);
    CHECK_FALSE(r.passed);
    CHECK(r.minAbsValue <= 1e-12);
  }
  SUBCASE("2x + y = 0 under fixture B") {
    const Scenario b = fixtureB(64);
    std::vector<SectionSample> samples;
    double oracle = 1e300;
    for (int j = 0; j < 64; ++j) {
      const double x = j / 64.0;
      samples.push_back(sample2d({x, 1.0 - 2.0 * x + (x > 0.5 ? 1.0 : 0.0), 0.0}, {2.0, 1.0, 0.0}));
      // dy - X_2 dx on the unit tangent (-1, 2) / sqrt 5.
      const double x2 = 0.5 + 0.05 * std::sin(kTwoPi * x);
      oracle = std::min(oracle, (2.0 + x2) / std::sqrt(5.0));
    }
    const auto r = hondaCheck(samples, b);
    CHECK(r.passed);
    CHECK(r.minAbsValue >= 0.99);
    CHECK(r.minAbsValue == doctest::Approx(oracle).epsilon(1e-10));
  }
  SUBCASE("{z = 0} for fixture C") {
    const Scenario c = fixtureCFlat(16);
    std::vector<SectionSample> samples;
    for (int j = 0; j < 8; ++j) {
      SectionSample s;
      s.point = {j / 8.0, 0.25, 0.0};
      s.normal = {0.0, 0.0, 1.0};
      s.tangents = {Point{1.0, 0.0, 0.0}, Point{0.0, 1.0, 0.0}};
      samples.push_back(s);
    }
    CHECK_FALSE(hondaCheck(samples, c).passed);
  }
  CHECK_THROWS_AS(hondaCheck({}, a), Error);
}

TEST_CASE("random scenarios: norm chain and positivity chain") {
  std::mt19937_64 rng(3);
  int passes = 0;
  for (int trial = 0; trial < 8; ++trial) {
    const auto d = trial % 2 == 0 ? TorusDomain::square(32) : TorusDomain::cube(16);
    const double strength = trial < 4 ? 0.2 : 0.02;
    const Scenario s = forms::randomScenario(d, rng, strength, strength / 10.0);
    const auto r = checkCriterion(s);
    CHECK(r.normChainResidual <= 1e-8);
    const auto c = buildClosedOneForm(s);
    CHECK(forms::exteriorDerivative(c.omega).maxAbsCoefficient() <= 1e-9);
    CHECK(c.minPairing >= c.pointwiseChainBound - 1e-12);
    if (r.verdict == Verdict::Pass) {
      ++passes;
      CHECK(c.accepted);
    }
  }
  CHECK(passes > 0);
}

// Diagnostic: the criterion is not invariant under X -> cX with Omega fixed.
// The scenario stays valid for any c > 0, so these read the report fields only.
TEST_CASE("diagnostic: scaling of the criterion fields") {
  const Scenario base = fixtureCFlat(32);
  const auto r1 = evaluateCriterion(base);
  for (double c : {0.1, 10.0}) {
    const Scenario s = scaled(base, c);
    CHECK(forms::validateScenario(s).ok());
    const auto r = evaluateCriterion(s);
    CHECK(r.deltaNorm == doctest::Approx(c * r1.deltaNorm).epsilon(1e-12));
    CHECK(r.mSquared == doctest::Approx(c * c * r1.mSquared).epsilon(1e-12));
  }
  // Small c makes the inequality harder, not easier: 0.2 pi versus 0.01.
  CHECK(evaluateCriterion(scaled(base, 0.1)).verdict == Verdict::Fail);
  // Large c passes (20 pi < 100), yet no closed form is positive on this flow.
  const Scenario big = scaled(base, 10.0);
  CHECK(evaluateCriterion(big).verdict == Verdict::Pass);
  const auto cert = buildClosedOneForm(big);
  CHECK_FALSE(cert.accepted);
  CHECK(cert.omega.maxAbsCoefficient() <= 1e-8);
}
