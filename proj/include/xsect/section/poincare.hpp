#pragma once

#include <cstdint>
#include <vector>

#include "xsect/forms/scenario.hpp"
#include "xsect/forms/spectral.hpp"
#include "xsect/section/circle_map.hpp"

namespace xsect::section {

/// X evaluated off-grid through its trigonometric interpolant.
class FlowField {
 public:
  explicit FlowField(const forms::VectorField& x);
  int dim() const { return static_cast<int>(components_.size()); }
  Point operator()(const Point& p) const;
  /// max over grid points of |X|.
  double supNorm() const { return sup_; }
  /// One classical RK4 step.
  Point rk4(const Point& p, double h) const;

 private:
  std::vector<forms::TrigInterpolant> components_;
  double sup_ = 0.0;
};

struct FlowOptions {
  double step = 0.0;  ///< 0 selects min(0.01, 0.1 / sup |X|)
  double eventTol = 1e-10;
  double projectionTol = 1e-9;
};

double defaultStep(const FlowField& x);

struct ReturnResult {
  Point image{0.0, 0.0, 0.0};      ///< in [0, 1)^n
  Point imageLift{0.0, 0.0, 0.0};  ///< seed + total displacement
  double tau = 0.0;
  long steps = 0;
  double eventResidual = 0.0;  ///< |F(image) - level| mod 1
  double minRate = 0.0;        ///< min dF/dt seen at step points
};

/// Integrates from a point of F^{-1}(level) until the lift of F has grown by 1.
ReturnResult flowToReturn(const Point& x0, const FlowField& x, const CircleMap& f, double level,
                          double transversalityMargin, const FlowOptions& options = {});

struct IntegratorStats {
  long totalSteps = 0;
  long maxSteps = 0;
  double maxEventResidual = 0.0;
  double minRate = 0.0;
  double step = 0.0;
};

struct PoincareData {
  std::vector<Point> seeds;
  std::vector<Point> images;
  std::vector<Point> imageLifts;
  std::vector<double> returnTimes;
  IntegratorStats stats;
};

PoincareData poincareMap(const std::vector<Point>& seeds, const FlowField& x, const CircleMap& f, double level,
                         double transversalityMargin, const FlowOptions& options = {});

struct InvariantMeasureReport {
  bool applicable = false;
  int arcs = 0;
  double maxDifference = 0.0;
  double tolerance = 1e-4;
  bool passed = false;
};

/// n = 2 only. With Phi a primitive of i_X Omega on R^2, the i_X Omega-measure
/// of the arc from seed a to seed b is Phi(b) - Phi(a); the measure of its image
/// arc uses the unwrapped images. Compares the two over random arcs.
InvariantMeasureReport invariantMeasureCheck(const PoincareData& pd, const forms::Scenario& s, int arcs = 16,
                                             std::uint64_t seed = 1);

struct JacobianReport {
  int seeds = 0;
  double maxDeviation = 0.0;  ///< max |rho(phi x) det J / rho(x) - 1|
  double time = 1.0;
};

/// Time-T flow map by fixed-step RK4.
Point flowMap(const FlowField& x, const Point& p, double time, double step);

/// Central finite-difference Jacobian of the time-T map on a perAxis^n seed grid.
JacobianReport flowJacobianCheck(const forms::Scenario& s, int perAxis = 16, double time = 1.0,
                                 double step = 0.0);

}  // namespace xsect::section
