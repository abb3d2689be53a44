#pragma once

#include <vector>

#include "xsect/projection/chart.hpp"

namespace xsect::projection {

/// Gauss-Legendre rule mapped to [0, 1].
struct Quadrature {
  std::vector<double> nodes;
  std::vector<double> weights;

  static Quadrature gaussLegendre(int count);
  int size() const { return static_cast<int>(nodes.size()); }
};

/// Form on chart x [0,1] sampled at chart nodes x quadrature nodes.
/// Coordinates are ordered (t, x_1, ..., x_n). Each component stores
/// `quadrature.size() * chart.size()` values, t-major.
struct ProductForm {
  BoxChart chart;
  Quadrature t;
  int degree = 0;
  std::vector<std::vector<double>> components;

  ProductForm(const BoxChart& chart, const Quadrature& t, int degree);
  int dim() const { return chart.dim + 1; }
  std::size_t sampleCount() const { return chart.size() * t.nodes.size(); }
};

/// omega = omega0 + dt ^ eta with neither part containing dt.
/// omega0 is a k-form and eta a (k-1)-form on the base, both t-dependent.
struct CylinderForm {
  BoxChart chart;
  Quadrature t;
  int degree = 0;
  std::vector<std::vector<double>> omega0;
  std::vector<std::vector<double>> eta;

  ProductForm reassemble() const;
  /// Flat sup norm of the whole form over all samples.
  double supNorm() const;
};

CylinderForm cylinderDecompose(const ProductForm& form);

/// (H omega)_p = integral over [0,1] of eta_(p,t) dt.
ChartForm homotopyOperator(const CylinderForm& form);

/// Pullback of xi under H(p, t) = center + t (p - center).
ProductForm radialPullback(const ChartForm& xi, const Point& center, const Quadrature& t);

struct HomotopyResidual {
  double residual = 0.0;  ///< sup |xi - dH(H*xi) - H(H*dxi)| over chart nodes
  double xiNorm = 0.0;
  double homotopyNorm = 0.0;  ///< sup norm of H(H*xi)
  int quadratureNodes = 0;
};

/// Checks xi = dH(H*xi) + H(H*dxi) for the radial contraction onto `center`.
HomotopyResidual verifyHomotopyFormula(const ChartForm& xi, const Point& center,
                                       int quadratureNodes = 16);

/// Same, for a torus form restricted to a box chart.
HomotopyResidual verifyHomotopyFormula(const forms::KForm& xi, const BoxChart& chart,
                                       const Point& center, int quadratureNodes = 16);

}  // namespace xsect::projection
