#pragma once

#include <array>
#include <vector>

#include "xsect/criterion/honda.hpp"
#include "xsect/forms/fields.hpp"
#include "xsect/forms/spectral.hpp"
#include "xsect/section/periods.hpp"

namespace xsect::section {

using forms::Point;

/// F(x) = k.x + f(x) / scale (mod 1), so dF = omega' / scale with omega' the
/// rationalized closed form. The lift is evaluated on unwrapped coordinates.
class CircleMap {
 public:
  CircleMap(std::vector<long long> k, double scale, forms::ScalarField potential);
  /// F = k.x with no potential.
  static CircleMap linear(const forms::TorusDomain& domain, std::vector<long long> k);

  int dim() const { return static_cast<int>(k_.size()); }
  const std::vector<long long>& k() const { return k_; }
  double scale() const { return scale_; }
  const forms::ScalarField& potential() const { return potential_; }

  double lift(const Point& x) const;
  double lift(const Point& x, std::array<double, 3>& grad) const;
  /// lift(x) mod 1 in [0, 1).
  double value(const Point& x) const;
  /// Signed distance of lift(x) - level to the nearest integer.
  double residual(const Point& x, double level) const;

  /// Newton steps along grad F until |F - level| mod 1 <= tol.
  Point projectToLevel(Point x, double level, double tol = 1e-13) const;

  /// min over grid points of dF(X).
  double transversalityMargin(const forms::VectorField& x) const;

 private:
  std::vector<long long> k_;
  double scale_;
  forms::ScalarField potential_;
  forms::TrigInterpolant interp_;
  std::vector<forms::ScalarField> gradient_;
};

struct CircleMapResult {
  CircleMap map;
  double transversalityMargin = 0.0;
  double formResidual = 0.0;  ///< sup |dF - omega'/scale| on the grid
};

/// Builds F from a closed omega and its rationalized class.
/// Throws "positivity violated after perturbation" if dF(X) is not positive.
CircleMapResult circleMap(const forms::KForm& omega, const PeriodData& pd, const forms::VectorField& x);

struct CrossSection {
  double level = 0.0;
  std::vector<criterion::SectionSample> samples;
  double transversalityMargin = 0.0;
  double maxResidual = 0.0;  ///< max |F - level| mod 1 over samples
};

/// Point cloud of F^{-1}(level): one sample per grid vertex on the level set
/// and per strict crossing on each positive-direction grid edge, refined by
/// Newton along grad F and carrying an oriented tangent frame.
CrossSection extractSection(const CircleMap& f, const forms::TorusDomain& domain, double level = 0.0);

/// Seeds on F^{-1}(level) along lines parallel to the axis with the largest
/// |k_a|; `perAxis` lines per remaining axis.
std::vector<Point> sectionSeeds(const CircleMap& f, int perAxis, double level = 0.0);

}  // namespace xsect::section
