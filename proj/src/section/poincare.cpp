#include "xsect/section/poincare.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <string>

#include "xsect/error.hpp"
#include "xsect/forms/operators.hpp"
#include "xsect/projection/hodge_projection.hpp"

namespace xsect::section {

FlowField::FlowField(const forms::VectorField& x) {
  for (int i = 0; i < x.dim(); ++i) components_.emplace_back(x[i]);
  for (std::size_t p = 0; p < x.domain().size(); ++p) sup_ = std::max(sup_, x.at(p).norm());
}

Point FlowField::operator()(const Point& p) const {
  Point v{0.0, 0.0, 0.0};
  for (int i = 0; i < dim(); ++i) v[i] = components_[i].value(p);
  return v;
}

Point FlowField::rk4(const Point& p, double h) const {
  const int n = dim();
  auto shifted = [&](const Point& k, double s) {
    Point q = p;
    for (int i = 0; i < n; ++i) q[i] += s * k[i];
    return q;
  };
  const Point k1 = (*this)(p);
  const Point k2 = (*this)(shifted(k1, 0.5 * h));
  const Point k3 = (*this)(shifted(k2, 0.5 * h));
  const Point k4 = (*this)(shifted(k3, h));
  Point out = p;
  for (int i = 0; i < n; ++i) out[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
  return out;
}

double defaultStep(const FlowField& x) {
  if (!(x.supNorm() > 0.0)) throw Error("vector field vanishes");
  return std::min(0.01, 0.1 / x.supNorm());
}

ReturnResult flowToReturn(const Point& x0, const FlowField& x, const CircleMap& f, double level,
                          double transversalityMargin, const FlowOptions& options) {
  const int n = x.dim();
  const double h = options.step > 0.0 ? options.step : defaultStep(x);
  if (!(transversalityMargin > 0.0)) throw Error("transversality margin must be positive");
  const long maxSteps = static_cast<long>(std::ceil(10.0 / (h * transversalityMargin)));
  const double target = std::round(f.lift(x0) - level) + level + 1.0;

  auto rate = [&](const Point& p) {
    std::array<double, 3> g;
    f.lift(p, g);
    const Point v = x(p);
    double r = 0.0;
    for (int i = 0; i < n; ++i) r += g[i] * v[i];
    return r;
  };

  ReturnResult out;
  out.minRate = rate(x0);
  Point cur = x0;
  double t = 0.0;
  while (true) {
    if (out.steps >= maxSteps) {
      throw Error("return bound exceeded after " + std::to_string(out.steps) + " steps");
    }
    const Point next = x.rk4(cur, h);
    ++out.steps;
    if (f.lift(next) < target) {
      cur = next;
      t += h;
      out.minRate = std::min(out.minRate, rate(cur));
      continue;
    }
    // The event lies in this step: bisect, then Newton on s.
    auto phi = [&](double s) { return f.lift(x.rk4(cur, s)) - target; };
    double lo = 0.0, hi = h;
    for (int it = 0; it < 30 && hi - lo > 1e-7 * h; ++it) {
      const double mid = 0.5 * (lo + hi);
      if (phi(mid) < 0.0)
        lo = mid;
      else
        hi = mid;
    }
    double s = 0.5 * (lo + hi);
    for (int it = 0; it < 50; ++it) {
      const Point p = x.rk4(cur, s);
      const double ds = (f.lift(p) - target) / rate(p);
      s = std::clamp(s - ds, 0.0, h);
      if (std::abs(ds) <= options.eventTol) break;
    }
    Point landing = f.projectToLevel(x.rk4(cur, s), level);
    out.tau = t + s;
    out.imageLift = landing;
    for (int i = 0; i < n; ++i) landing[i] = forms::wrapUnit(landing[i]);
    out.image = landing;
    out.eventResidual = std::abs(f.residual(out.imageLift, level));
    out.minRate = std::min(out.minRate, rate(out.imageLift));
    if (out.eventResidual > options.projectionTol) {
      throw Error("event projection residual " + std::to_string(out.eventResidual) + " above tolerance");
    }
    return out;
  }
}

PoincareData poincareMap(const std::vector<Point>& seeds, const FlowField& x, const CircleMap& f, double level,
                         double transversalityMargin, const FlowOptions& options) {
  PoincareData pd;
  pd.seeds = seeds;
  pd.stats.step = options.step > 0.0 ? options.step : defaultStep(x);
  pd.stats.minRate = std::numeric_limits<double>::infinity();
  for (const Point& s : seeds) {
    const ReturnResult r = flowToReturn(s, x, f, level, transversalityMargin, options);
    pd.images.push_back(r.image);
    pd.imageLifts.push_back(r.imageLift);
    pd.returnTimes.push_back(r.tau);
    pd.stats.totalSteps += r.steps;
    pd.stats.maxSteps = std::max(pd.stats.maxSteps, r.steps);
    pd.stats.maxEventResidual = std::max(pd.stats.maxEventResidual, r.eventResidual);
    pd.stats.minRate = std::min(pd.stats.minRate, r.minRate);
  }
  return pd;
}

InvariantMeasureReport invariantMeasureCheck(const PoincareData& pd, const forms::Scenario& s, int arcs,
                                             std::uint64_t seed) {
  InvariantMeasureReport r;
  if (s.dim() != 2 || pd.seeds.size() < 2) return r;
  r.applicable = true;

  // i_X Omega is closed: it equals its mean plus dh, so Phi = mean.x + h.
  const forms::KForm beta = forms::interiorProduct(s.x, s.omega);
  const auto split = projection::hodgeClosedProjection(beta);
  const forms::TrigInterpolant h(split.exactPartPotential);
  auto phi = [&](const Point& p) { return split.harmonicPart[0] * p[0] + split.harmonicPart[1] * p[1] + h.value(p); };
  std::vector<double> drift(pd.seeds.size());
  for (std::size_t i = 0; i < drift.size(); ++i) drift[i] = phi(pd.imageLifts[i]) - phi(pd.seeds[i]);

  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::size_t> pick(0, pd.seeds.size() - 1);
  for (int a = 0; a < arcs; ++a) {
    std::size_t i = pick(rng), j = pick(rng);
    while (j == i) j = pick(rng);
    r.maxDifference = std::max(r.maxDifference, std::abs(drift[j] - drift[i]));
    ++r.arcs;
  }
  r.passed = r.maxDifference <= r.tolerance;
  return r;
}

Point flowMap(const FlowField& x, const Point& p, double time, double step) {
  const long steps = std::max(1L, static_cast<long>(std::ceil(time / step - 1e-12)));
  const double h = time / static_cast<double>(steps);
  Point cur = p;
  for (long i = 0; i < steps; ++i) cur = x.rk4(cur, h);
  return cur;
}

JacobianReport flowJacobianCheck(const forms::Scenario& s, int perAxis, double time, double step) {
  const FlowField x(s.x);
  const double h = step > 0.0 ? step : defaultStep(x);
  const forms::TrigInterpolant rho(s.omega.component(0));
  const int n = s.dim();
  const double eps = 1e-5;

  JacobianReport r;
  r.time = time;
  long total = 1;
  for (int a = 0; a < n; ++a) total *= perAxis;
  for (long idx = 0; idx < total; ++idx) {
    Point p{0.0, 0.0, 0.0};
    long rest = idx;
    for (int a = n - 1; a >= 0; --a) {
      p[a] = static_cast<double>(rest % perAxis) / perAxis;
      rest /= perAxis;
    }
    Eigen::Matrix3d jac = Eigen::Matrix3d::Identity();
    for (int a = 0; a < n; ++a) {
      Point plus = p, minus = p;
      plus[a] += eps;
      minus[a] -= eps;
      const Point fp = flowMap(x, plus, time, h), fm = flowMap(x, minus, time, h);
      for (int i = 0; i < n; ++i) jac(i, a) = (fp[i] - fm[i]) / (2.0 * eps);
    }
    const double det = n == 2 ? jac.topLeftCorner<2, 2>().determinant() : jac.determinant();
    const Point image = flowMap(x, p, time, h);
    const double distortion = rho.value(image) * det / rho.value(p);
    r.maxDeviation = std::max(r.maxDeviation, std::abs(distortion - 1.0));
    ++r.seeds;
  }
  return r;
}

}  // namespace xsect::section
