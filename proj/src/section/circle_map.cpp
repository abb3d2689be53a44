#include "xsect/section/circle_map.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "xsect/error.hpp"
#include "xsect/projection/hodge_projection.hpp"

namespace xsect::section {

using forms::ScalarField;

namespace {

constexpr double kVertexTol = 1e-12;

criterion::SectionSample makeSample(const Point& x, const std::array<double, 3>& grad, int n) {
  criterion::SectionSample s;
  s.point = x;
  double len = 0.0;
  for (int i = 0; i < n; ++i) len += grad[i] * grad[i];
  len = std::sqrt(len);
  for (int i = 0; i < n; ++i) s.normal[i] = grad[i] / len;
  const auto& nv = s.normal;
  if (n == 2) {
    s.tangents[0] = {-nv[1], nv[0], 0.0};
    return s;
  }
  // t1 = normalize(n x e) with e the axis least aligned with n; t2 = n x t1.
  int e = 0;
  for (int i = 1; i < 3; ++i)
    if (std::abs(nv[i]) < std::abs(nv[e])) e = i;
  Point ev{0.0, 0.0, 0.0};
  ev[e] = 1.0;
  auto cross = [](const Point& a, const Point& b) {
    return Point{a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
  };
  Point t1 = cross(nv, ev);
  const double l1 = std::sqrt(t1[0] * t1[0] + t1[1] * t1[1] + t1[2] * t1[2]);
  for (double& v : t1) v /= l1;
  s.tangents[0] = t1;
  s.tangents[1] = cross(nv, t1);
  return s;
}

Point wrapPoint(Point x, int n) {
  for (int i = 0; i < n; ++i) x[i] = forms::wrapUnit(x[i]);
  return x;
}

}  // namespace

CircleMap::CircleMap(std::vector<long long> k, double scale, ScalarField potential)
    : k_(std::move(k)),
      scale_(scale),
      potential_(std::move(potential)),
      interp_(potential_),
      gradient_(forms::gradient(potential_)) {
  if (static_cast<int>(k_.size()) != potential_.domain().dim()) throw Error("class and domain dimensions differ");
  if (!(scale_ > 0.0)) throw Error("circle map scale must be positive");
}

CircleMap CircleMap::linear(const forms::TorusDomain& domain, std::vector<long long> k) {
  return CircleMap(std::move(k), 1.0, ScalarField(domain));
}

double CircleMap::lift(const Point& x) const {
  double v = interp_.modeCount() == 0 ? 0.0 : interp_.value(x) / scale_;
  for (int i = 0; i < dim(); ++i) v += static_cast<double>(k_[i]) * x[i];
  return v;
}

double CircleMap::lift(const Point& x, std::array<double, 3>& grad) const {
  double v = 0.0;
  grad = {0.0, 0.0, 0.0};
  if (interp_.modeCount() != 0) {
    v = interp_.valueAndGradient(x, grad) / scale_;
    for (double& g : grad) g /= scale_;
  }
  for (int i = 0; i < dim(); ++i) {
    v += static_cast<double>(k_[i]) * x[i];
    grad[i] += static_cast<double>(k_[i]);
  }
  return v;
}

double CircleMap::value(const Point& x) const { return forms::wrapUnit(lift(x)); }

double CircleMap::residual(const Point& x, double level) const {
  const double r = lift(x) - level;
  return r - std::round(r);
}

Point CircleMap::projectToLevel(Point x, double level, double tol) const {
  std::array<double, 3> g;
  for (int it = 0; it < 60; ++it) {
    const double raw = lift(x, g) - level;
    const double r = raw - std::round(raw);
    if (std::abs(r) <= tol) break;
    double gg = 0.0;
    for (int i = 0; i < dim(); ++i) gg += g[i] * g[i];
    if (gg == 0.0) throw Error("circle map has a critical point");
    for (int i = 0; i < dim(); ++i) x[i] -= r * g[i] / gg;
  }
  return x;
}

double CircleMap::transversalityMargin(const forms::VectorField& x) const {
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t p = 0; p < x.domain().size(); ++p) {
    double v = 0.0;
    for (int i = 0; i < dim(); ++i) v += (static_cast<double>(k_[i]) + gradient_[i][p] / scale_) * x[i][p];
    best = std::min(best, v);
  }
  return best;
}

CircleMapResult circleMap(const forms::KForm& omega, const PeriodData& pd, const forms::VectorField& x) {
  const auto proj = projection::hodgeClosedProjection(omega);
  double mismatch = 0.0;
  for (std::size_t c = 0; c < omega.componentCount(); ++c)
    for (std::size_t p = 0; p < omega.component(c).size(); ++p)
      mismatch = std::max(mismatch, std::abs(proj.omega.component(c)[p] - omega.component(c)[p]));
  if (mismatch > 1e-8) throw Error("form not closed enough: co-exact part " + std::to_string(mismatch));

  CircleMapResult out{CircleMap(pd.k, pd.scale, proj.exactPartPotential), 0.0, 0.0};
  const auto grad = forms::gradient(proj.exactPartPotential);
  const int n = omega.dim();
  for (int i = 0; i < n; ++i) {
    for (std::size_t p = 0; p < grad[i].size(); ++p) {
      const double dF = static_cast<double>(pd.k[i]) + grad[i][p] / pd.scale;
      const double target = (omega.component(i)[p] + pd.perturbation.component(i)[p]) / pd.scale;
      out.formResidual = std::max(out.formResidual, std::abs(dF - target));
    }
  }
  out.transversalityMargin = out.map.transversalityMargin(x);
  if (!(out.transversalityMargin > 0.0)) {
    throw Error("positivity violated after perturbation: min dF(X) = " + std::to_string(out.transversalityMargin));
  }
  return out;
}

CrossSection extractSection(const CircleMap& f, const forms::TorusDomain& domain, double level) {
  const int n = domain.dim();
  if (f.dim() != n) throw Error("circle map and domain dimensions differ");
  const ScalarField& pot = f.potential();
  const bool samePotentialGrid = pot.domain() == domain;

  std::vector<double> g(domain.size());
  for (std::size_t p = 0; p < domain.size(); ++p) {
    const Point x = domain.point(p);
    if (samePotentialGrid) {
      double v = pot[p] / f.scale();
      for (int i = 0; i < n; ++i) v += static_cast<double>(f.k()[i]) * x[i];
      g[p] = v - level;
    } else {
      g[p] = f.lift(x) - level;
    }
  }

  CrossSection out;
  out.level = level;
  std::array<double, 3> grad;
  auto emit = [&](const Point& guess) {
    const Point x = wrapPoint(f.projectToLevel(guess, level), n);
    f.lift(x, grad);
    out.samples.push_back(makeSample(x, grad, n));
    out.maxResidual = std::max(out.maxResidual, std::abs(f.residual(x, level)));
  };

  for (std::size_t p = 0; p < domain.size(); ++p) {
    const Point x = domain.point(p);
    const double ga = g[p];
    if (std::abs(ga - std::round(ga)) <= kVertexTol) emit(x);
    const auto idx = domain.unflatten(p);
    for (int a = 0; a < n; ++a) {
      auto next = idx;
      next[a] += 1;
      double gb;
      if (next[a] == domain.resolution(a)) {
        next[a] = 0;
        gb = g[domain.flatten(next)] + static_cast<double>(f.k()[a]);
      } else {
        gb = g[domain.flatten(next)];
      }
      const double lo = std::min(ga, gb), hi = std::max(ga, gb);
      for (double t = std::ceil(lo); t <= std::floor(hi); t += 1.0) {
        if (t - lo <= kVertexTol || hi - t <= kVertexTol) continue;
        Point guess = x;
        guess[a] += domain.spacing(a) * (t - ga) / (gb - ga);
        emit(guess);
      }
    }
  }
  if (out.samples.empty()) throw Error("internal error: empty level set");
  return out;
}

std::vector<Point> sectionSeeds(const CircleMap& f, int perAxis, double level) {
  const int n = f.dim();
  if (perAxis < 1) throw Error("need at least one seed per axis");
  int a = 0;
  for (int i = 1; i < n; ++i)
    if (std::llabs(f.k()[i]) > std::llabs(f.k()[a])) a = i;
  if (f.k()[a] == 0) throw Error("circle map has zero class");
  std::vector<int> others;
  for (int i = 0; i < n; ++i)
    if (i != a) others.push_back(i);

  const int scan = 4 * f.potential().domain().resolution(a);
  std::vector<Point> seeds;
  const int lines = n == 2 ? perAxis : perAxis * perAxis;
  for (int line = 0; line < lines; ++line) {
    Point base{0.0, 0.0, 0.0};
    base[others[0]] = static_cast<double>(n == 2 ? line : line / perAxis) / perAxis;
    if (n == 3) base[others[1]] = static_cast<double>(line % perAxis) / perAxis;
    auto at = [&](double s) {
      Point x = base;
      x[a] = s;
      return f.lift(x) - level;
    };
    bool found = false;
    double prev = at(0.0);
    for (int i = 0; i < scan && !found; ++i) {
      const double s0 = static_cast<double>(i) / scan, s1 = static_cast<double>(i + 1) / scan;
      const double cur = at(s1);
      const double t = std::abs(prev - std::round(prev)) <= kVertexTol ? std::round(prev) : std::ceil(std::min(prev, cur));
      if (std::abs(prev - t) <= kVertexTol) {
        base[a] = s0;
        found = true;
      } else if ((prev - t) * (cur - t) < 0.0) {
        double lo = s0, hi = s1;
        const double sign = prev < t ? 1.0 : -1.0;
        for (int it = 0; it < 80; ++it) {
          const double mid = 0.5 * (lo + hi);
          if (sign * (at(mid) - t) < 0.0)
            lo = mid;
          else
            hi = mid;
        }
        base[a] = 0.5 * (lo + hi);
        found = true;
      }
      prev = cur;
    }
    if (!found) throw Error("no level crossing on seed line " + std::to_string(line));
    seeds.push_back(wrapPoint(base, n));
  }
  return seeds;
}

}  // namespace xsect::section
