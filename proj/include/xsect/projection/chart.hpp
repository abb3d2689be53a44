#pragma once

#include <array>
#include <functional>
#include <span>
#include <vector>

#include "xsect/forms/domain.hpp"
#include "xsect/forms/fields.hpp"

namespace xsect::projection {

using forms::Point;

/// Axis-aligned box in R^n sampled on a tensor Chebyshev-Lobatto grid.
struct BoxChart {
  int dim = 2;
  std::array<double, 3> lower{0.0, 0.0, 0.0};
  std::array<double, 3> upper{1.0, 1.0, 1.0};
  int nodes = 24;  ///< per axis

  std::size_t size() const;
  double nodeCoordinate(int axis, int j) const;
  std::array<int, 3> unflatten(std::size_t flat) const;
  Point node(std::size_t flat) const;
  bool contains(const Point& p, double slack = 1e-12) const;
};

/// Fills `out` with the canonical components of a form at a point.
using FormSampler = std::function<void(const Point&, std::span<double>)>;

/// Differential form on a box chart, stored at the chart's Chebyshev nodes and
/// read as their tensor polynomial interpolant.
class ChartForm {
 public:
  ChartForm(const BoxChart& chart, int degree);

  static ChartForm sample(const BoxChart& chart, int degree, const FormSampler& sampler);
  /// Restriction of a torus form to the chart (the box may straddle the
  /// periodic seam; the torus form is read through its trigonometric interpolant).
  static ChartForm restrictTorusForm(const BoxChart& chart, const forms::KForm& form);

  const BoxChart& chart() const { return chart_; }
  int degree() const { return degree_; }
  std::size_t componentCount() const { return components_.size(); }
  std::vector<double>& component(std::size_t c) { return components_[c]; }
  const std::vector<double>& component(std::size_t c) const { return components_[c]; }

  /// Barycentric tensor interpolation at an arbitrary point of the box.
  void evaluate(const Point& p, std::span<double> out) const;
  /// Largest flat operator norm over the nodes.
  double supNorm() const;

 private:
  BoxChart chart_;
  int degree_;
  std::vector<std::vector<double>> components_;
  std::array<std::vector<double>, 3> nodeCoordinates_;
};

/// Exterior derivative via Chebyshev differentiation along each axis.
ChartForm chartExteriorDerivative(const ChartForm& form);

/// Operator norm of a k-form at a point of flat R^d, d <= 4.
double flatOperatorNorm(int d, int k, std::span<const double> components);

}  // namespace xsect::projection
