#pragma once

#include <Eigen/Dense>

#include <functional>
#include <memory>
#include <span>
#include <vector>

#include "xsect/forms/domain.hpp"

namespace xsect::forms {

/// Real samples on the torus grid, read as the trigonometric interpolant
/// through them.
class ScalarField {
 public:
  explicit ScalarField(const TorusDomain& domain, double value = 0.0);
  ScalarField(const TorusDomain& domain, std::vector<double> values);

  static ScalarField fromFunction(const TorusDomain& domain,
                                  const std::function<double(const Point&)>& fn);

  const TorusDomain& domain() const { return domain_; }
  std::size_t size() const { return values_.size(); }
  double operator[](std::size_t i) const { return values_[i]; }
  double& operator[](std::size_t i) { return values_[i]; }
  std::span<const double> values() const { return values_; }
  std::span<double> values() { return values_; }

  double maxAbs() const;
  double min() const;
  double max() const;
  double mean() const;

  ScalarField& operator+=(const ScalarField& other);
  ScalarField& operator-=(const ScalarField& other);
  ScalarField& operator*=(double s);

 private:
  TorusDomain domain_;
  std::vector<double> values_;
};

ScalarField operator+(ScalarField a, const ScalarField& b);
ScalarField operator-(ScalarField a, const ScalarField& b);
ScalarField operator*(double s, ScalarField a);
/// Pointwise (collocation) product.
ScalarField operator*(const ScalarField& a, const ScalarField& b);

/// Degree-k differential form; one component per strictly increasing
/// multi-index, ordered as multiIndices(n, k).
class KForm {
 public:
  KForm(const TorusDomain& domain, int degree);
  KForm(int degree, std::vector<ScalarField> components);

  /// Form with constant coefficients, one per canonical multi-index.
  static KForm constant(const TorusDomain& domain, int degree, std::span<const double> coeffs);

  const TorusDomain& domain() const { return components_.front().domain(); }
  int dim() const { return domain().dim(); }
  int degree() const { return degree_; }
  std::size_t componentCount() const { return components_.size(); }

  const ScalarField& component(std::size_t i) const { return components_[i]; }
  ScalarField& component(std::size_t i) { return components_[i]; }
  /// Component for an increasing multi-index such as {0, 2} for dx^dz.
  const ScalarField& component(const std::vector<int>& index) const;
  ScalarField& component(const std::vector<int>& index);

  /// Largest absolute coefficient over all components and grid points.
  double maxAbsCoefficient() const;

  KForm& operator+=(const KForm& other);
  KForm& operator-=(const KForm& other);
  KForm& operator*=(double s);

 private:
  int degree_;
  std::vector<ScalarField> components_;
};

KForm operator+(KForm a, const KForm& b);
KForm operator-(KForm a, const KForm& b);
KForm operator*(double s, KForm a);

/// n-component vector field on the torus grid.
class VectorField {
 public:
  explicit VectorField(std::vector<ScalarField> components);
  static VectorField constant(const TorusDomain& domain, std::span<const double> value);
  static VectorField fromFunction(const TorusDomain& domain,
                                  const std::function<Point(const Point&)>& fn);

  const TorusDomain& domain() const { return components_.front().domain(); }
  int dim() const { return static_cast<int>(components_.size()); }
  const ScalarField& operator[](int i) const { return components_[i]; }
  ScalarField& operator[](int i) { return components_[i]; }
  Eigen::Vector3d at(std::size_t p) const;

  VectorField& operator*=(double s);

 private:
  std::vector<ScalarField> components_;
};

/// Small dense matrix with heap-free storage for n <= 3.
using SmallMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, 0, 3, 3>;
using SmallVector = Eigen::Matrix<double, Eigen::Dynamic, 1, 0, 3, 1>;

/// Per-point quantities derived from a metric; n x n blocks are row-major.
struct MetricGeometry {
  std::vector<double> inverse;          ///< g^{-1}
  std::vector<double> choleskyInverse;  ///< L^{-1} with g = L L^T
  std::vector<double> sqrtDet;
};

/// Symmetric n x n matrix per grid point.
///
/// Construction checks shape and symmetry; positive definiteness is checked by
/// every metric-dependent operation through its pointwise Cholesky factor.
class MetricField {
 public:
  MetricField(const TorusDomain& domain, std::vector<double> entries);

  static MetricField flat(const TorusDomain& domain);
  static MetricField constant(const TorusDomain& domain, const SmallMatrix& g);
  static MetricField diagonal(const TorusDomain& domain, std::span<const double> diag);
  static MetricField fromFunction(const TorusDomain& domain,
                                  const std::function<SmallMatrix(const Point&)>& fn);

  const TorusDomain& domain() const { return domain_; }
  int dim() const { return domain_.dim(); }
  SmallMatrix at(std::size_t p) const;
  double entry(std::size_t p, int i, int j) const {
    return entries_[(p * dim() + i) * dim() + j];
  }

  /// Throws unless every grid point carries a positive-definite matrix.
  void checkPositiveDefinite() const;
  double minEigenvalue() const;

  /// Computed on first use and shared by copies. Throws unless positive
  /// definite at every grid point.
  const MetricGeometry& geometry() const;

 private:
  struct GeometryCache;

  TorusDomain domain_;
  std::vector<double> entries_;
  std::shared_ptr<GeometryCache> cache_;
};

}  // namespace xsect::forms
