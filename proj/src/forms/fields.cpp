#include "xsect/forms/fields.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <mutex>
#include <string>

#include "xsect/error.hpp"

namespace xsect::forms {

namespace {

void requireSameDomain(const TorusDomain& a, const TorusDomain& b) {
  if (!(a == b)) throw Error("fields live on different grids");
}

}  // namespace

ScalarField::ScalarField(const TorusDomain& domain, double value)
    : domain_(domain), values_(domain.size(), value) {}

ScalarField::ScalarField(const TorusDomain& domain, std::vector<double> values)
    : domain_(domain), values_(std::move(values)) {
  if (values_.size() != domain_.size()) {
    throw Error("scalar field has " + std::to_string(values_.size()) + " samples, grid has " +
                std::to_string(domain_.size()));
  }
}

ScalarField ScalarField::fromFunction(const TorusDomain& domain,
                                      const std::function<double(const Point&)>& fn) {
  std::vector<double> values(domain.size());
  for (std::size_t p = 0; p < values.size(); ++p) values[p] = fn(domain.point(p));
  return ScalarField(domain, std::move(values));
}

double ScalarField::maxAbs() const {
  double m = 0.0;
  for (double v : values_) m = std::max(m, std::abs(v));
  return m;
}

double ScalarField::min() const { return *std::min_element(values_.begin(), values_.end()); }
double ScalarField::max() const { return *std::max_element(values_.begin(), values_.end()); }

double ScalarField::mean() const {
  // Kahan summation.
  double sum = 0.0;
  double comp = 0.0;
  for (double v : values_) {
    const double y = v - comp;
    const double t = sum + y;
    comp = (t - sum) - y;
    sum = t;
  }
  return sum / static_cast<double>(values_.size());
}

ScalarField& ScalarField::operator+=(const ScalarField& other) {
  requireSameDomain(domain_, other.domain_);
  for (std::size_t i = 0; i < values_.size(); ++i) values_[i] += other.values_[i];
  return *this;
}

ScalarField& ScalarField::operator-=(const ScalarField& other) {
  requireSameDomain(domain_, other.domain_);
  for (std::size_t i = 0; i < values_.size(); ++i) values_[i] -= other.values_[i];
  return *this;
}

ScalarField& ScalarField::operator*=(double s) {
  for (double& v : values_) v *= s;
  return *this;
}

ScalarField operator+(ScalarField a, const ScalarField& b) { return a += b; }
ScalarField operator-(ScalarField a, const ScalarField& b) { return a -= b; }
ScalarField operator*(double s, ScalarField a) { return a *= s; }

ScalarField operator*(const ScalarField& a, const ScalarField& b) {
  requireSameDomain(a.domain(), b.domain());
  ScalarField out(a.domain());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] * b[i];
  return out;
}

KForm::KForm(const TorusDomain& domain, int degree) : degree_(degree) {
  if (degree < 0 || degree > domain.dim()) {
    throw Error("form degree " + std::to_string(degree) + " out of range for dimension " +
                std::to_string(domain.dim()));
  }
  components_.assign(binomial(domain.dim(), degree), ScalarField(domain));
}

KForm::KForm(int degree, std::vector<ScalarField> components)
    : degree_(degree), components_(std::move(components)) {
  if (components_.empty()) throw Error("form needs at least one component");
  const int n = components_.front().domain().dim();
  if (degree < 0 || degree > n ||
      static_cast<int>(components_.size()) != binomial(n, degree)) {
    throw Error("a " + std::to_string(degree) + "-form on T^" + std::to_string(n) + " has " +
                std::to_string(binomial(n, degree)) + " components");
  }
  for (const auto& c : components_) requireSameDomain(c.domain(), components_.front().domain());
}

KForm KForm::constant(const TorusDomain& domain, int degree, std::span<const double> coeffs) {
  KForm form(domain, degree);
  if (coeffs.size() != form.componentCount()) throw Error("wrong number of coefficients");
  for (std::size_t i = 0; i < coeffs.size(); ++i) form.components_[i] = ScalarField(domain, coeffs[i]);
  return form;
}

const ScalarField& KForm::component(const std::vector<int>& index) const {
  return components_[multiIndexPosition(dim(), index)];
}

ScalarField& KForm::component(const std::vector<int>& index) {
  return components_[multiIndexPosition(dim(), index)];
}

double KForm::maxAbsCoefficient() const {
  double m = 0.0;
  for (const auto& c : components_) m = std::max(m, c.maxAbs());
  return m;
}

KForm& KForm::operator+=(const KForm& other) {
  if (degree_ != other.degree_) throw Error("cannot add forms of different degree");
  for (std::size_t i = 0; i < components_.size(); ++i) components_[i] += other.components_[i];
  return *this;
}

KForm& KForm::operator-=(const KForm& other) {
  if (degree_ != other.degree_) throw Error("cannot subtract forms of different degree");
  for (std::size_t i = 0; i < components_.size(); ++i) components_[i] -= other.components_[i];
  return *this;
}

KForm& KForm::operator*=(double s) {
  for (auto& c : components_) c *= s;
  return *this;
}

KForm operator+(KForm a, const KForm& b) { return a += b; }
KForm operator-(KForm a, const KForm& b) { return a -= b; }
KForm operator*(double s, KForm a) { return a *= s; }

VectorField::VectorField(std::vector<ScalarField> components) : components_(std::move(components)) {
  if (components_.empty() || static_cast<int>(components_.size()) != components_.front().domain().dim()) {
    throw Error("vector field needs one component per torus dimension");
  }
  for (const auto& c : components_) requireSameDomain(c.domain(), components_.front().domain());
}

VectorField VectorField::constant(const TorusDomain& domain, std::span<const double> value) {
  if (static_cast<int>(value.size()) != domain.dim()) throw Error("wrong vector length");
  std::vector<ScalarField> comps;
  for (double v : value) comps.emplace_back(domain, v);
  return VectorField(std::move(comps));
}

VectorField VectorField::fromFunction(const TorusDomain& domain,
                                      const std::function<Point(const Point&)>& fn) {
  std::vector<ScalarField> comps(domain.dim(), ScalarField(domain));
  for (std::size_t p = 0; p < domain.size(); ++p) {
    const Point v = fn(domain.point(p));
    for (int a = 0; a < domain.dim(); ++a) comps[a][p] = v[a];
  }
  return VectorField(std::move(comps));
}

Eigen::Vector3d VectorField::at(std::size_t p) const {
  Eigen::Vector3d v = Eigen::Vector3d::Zero();
  for (int a = 0; a < dim(); ++a) v[a] = components_[a][p];
  return v;
}

VectorField& VectorField::operator*=(double s) {
  for (auto& c : components_) c *= s;
  return *this;
}

struct MetricField::GeometryCache {
  std::once_flag once;
  MetricGeometry data;
};

MetricField::MetricField(const TorusDomain& domain, std::vector<double> entries)
    : domain_(domain), entries_(std::move(entries)), cache_(std::make_shared<GeometryCache>()) {
  const int n = domain_.dim();
  if (entries_.size() != domain_.size() * n * n) throw Error("metric field has the wrong size");
  for (std::size_t p = 0; p < domain_.size(); ++p) {
    for (int i = 0; i < n; ++i) {
      for (int j = i + 1; j < n; ++j) {
        const double a = entry(p, i, j);
        const double b = entry(p, j, i);
        if (std::abs(a - b) > 1e-12 * std::max(1.0, std::abs(a))) {
          throw Error("metric is not symmetric at grid point " + std::to_string(p));
        }
      }
    }
  }
}

MetricField MetricField::flat(const TorusDomain& domain) {
  const int n = domain.dim();
  return constant(domain, SmallMatrix::Identity(n, n));
}

MetricField MetricField::constant(const TorusDomain& domain, const SmallMatrix& g) {
  return fromFunction(domain, [&](const Point&) { return g; });
}

MetricField MetricField::diagonal(const TorusDomain& domain, std::span<const double> diag) {
  const int n = domain.dim();
  if (static_cast<int>(diag.size()) != n) throw Error("wrong number of diagonal entries");
  SmallMatrix g = SmallMatrix::Zero(n, n);
  for (int i = 0; i < n; ++i) g(i, i) = diag[i];
  return constant(domain, g);
}

MetricField MetricField::fromFunction(const TorusDomain& domain,
                                      const std::function<SmallMatrix(const Point&)>& fn) {
  const int n = domain.dim();
  std::vector<double> entries(domain.size() * n * n);
  for (std::size_t p = 0; p < domain.size(); ++p) {
    const SmallMatrix g = fn(domain.point(p));
    if (g.rows() != n || g.cols() != n) throw Error("metric function returned wrong shape");
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) entries[(p * n + i) * n + j] = g(i, j);
  }
  return MetricField(domain, std::move(entries));
}

SmallMatrix MetricField::at(std::size_t p) const {
  const int n = dim();
  SmallMatrix g(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) g(i, j) = entry(p, i, j);
  return g;
}

void MetricField::checkPositiveDefinite() const {
  for (std::size_t p = 0; p < domain_.size(); ++p) {
    Eigen::LLT<SmallMatrix> llt(at(p));
    if (llt.info() != Eigen::Success) {
      throw Error("metric is not positive definite at grid point " + std::to_string(p));
    }
  }
}

namespace {

template <int N>
void fillGeometry(const MetricField& g, MetricGeometry& out) {
  using Mat = Eigen::Matrix<double, N, N, Eigen::RowMajor>;
  const std::size_t size = g.domain().size();
  out.inverse.resize(size * N * N);
  out.choleskyInverse.resize(size * N * N);
  out.sqrtDet.resize(size);
  for (std::size_t p = 0; p < size; ++p) {
    Mat gp;
    for (int i = 0; i < N; ++i)
      for (int j = 0; j < N; ++j) gp(i, j) = g.entry(p, i, j);
    Eigen::LLT<Mat> llt(gp);
    if (llt.info() != Eigen::Success) {
      throw Error("metric is not positive definite at grid point " + std::to_string(p));
    }
    const Mat l = llt.matrixL();
    const double sqrtDet = l.diagonal().prod();
    if (!(sqrtDet > 0.0)) throw Error("metric is not positive definite at grid point " + std::to_string(p));
    const Mat lInv = l.inverse();
    Eigen::Map<Mat>(out.choleskyInverse.data() + p * N * N) = lInv;
    Eigen::Map<Mat>(out.inverse.data() + p * N * N) = lInv.transpose() * lInv;
    out.sqrtDet[p] = sqrtDet;
  }
}

}  // namespace

const MetricGeometry& MetricField::geometry() const {
  std::call_once(cache_->once, [this] {
    if (dim() == 2) fillGeometry<2>(*this, cache_->data);
    else fillGeometry<3>(*this, cache_->data);
  });
  return cache_->data;
}

double MetricField::minEigenvalue() const {
  double m = std::numeric_limits<double>::infinity();
  for (std::size_t p = 0; p < domain_.size(); ++p) {
    Eigen::SelfAdjointEigenSolver<SmallMatrix> es(at(p), Eigen::EigenvaluesOnly);
    m = std::min(m, es.eigenvalues().minCoeff());
  }
  return m;
}

}  // namespace xsect::forms
