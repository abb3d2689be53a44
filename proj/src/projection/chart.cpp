#include "xsect/projection/chart.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <numbers>

#include "xsect/error.hpp"
#include "xsect/forms/spectral.hpp"

namespace xsect::projection {

namespace {

// Barycentric weights of Chebyshev-Lobatto nodes: (-1)^j, halved at the ends.
double lobattoWeight(int j, int m) {
  const double sign = j % 2 == 0 ? 1.0 : -1.0;
  return (j == 0 || j == m - 1) ? 0.5 * sign : sign;
}

// Normalized interpolation weights of the 1D barycentric formula at x.
void axisWeights(const std::vector<double>& nodes, double x, std::vector<double>& out) {
  const int m = static_cast<int>(nodes.size());
  out.assign(m, 0.0);
  for (int j = 0; j < m; ++j) {
    if (x == nodes[j]) {
      out[j] = 1.0;
      return;
    }
  }
  double sum = 0.0;
  for (int j = 0; j < m; ++j) {
    out[j] = lobattoWeight(j, m) / (x - nodes[j]);
    sum += out[j];
  }
  for (double& w : out) w /= sum;
}

Eigen::MatrixXd differentiationMatrix(const BoxChart& chart, int axis) {
  const int m = chart.nodes;
  Eigen::MatrixXd d = Eigen::MatrixXd::Zero(m, m);
  for (int i = 0; i < m; ++i) {
    double diag = 0.0;
    for (int j = 0; j < m; ++j) {
      if (i == j) continue;
      const double v = (lobattoWeight(j, m) / lobattoWeight(i, m)) /
                       (chart.nodeCoordinate(axis, i) - chart.nodeCoordinate(axis, j));
      d(i, j) = v;
      diag -= v;
    }
    d(i, i) = diag;
  }
  return d;
}

}  // namespace

std::size_t BoxChart::size() const {
  std::size_t s = 1;
  for (int a = 0; a < dim; ++a) s *= static_cast<std::size_t>(nodes);
  return s;
}

double BoxChart::nodeCoordinate(int axis, int j) const {
  const double t = 0.5 * (1.0 - std::cos(std::numbers::pi * j / (nodes - 1)));
  return lower[axis] + (upper[axis] - lower[axis]) * t;
}

std::array<int, 3> BoxChart::unflatten(std::size_t flat) const {
  std::array<int, 3> idx{0, 0, 0};
  for (int a = dim - 1; a >= 0; --a) {
    idx[a] = static_cast<int>(flat % nodes);
    flat /= nodes;
  }
  return idx;
}

Point BoxChart::node(std::size_t flat) const {
  const auto idx = unflatten(flat);
  Point p{0.0, 0.0, 0.0};
  for (int a = 0; a < dim; ++a) p[a] = nodeCoordinate(a, idx[a]);
  return p;
}

bool BoxChart::contains(const Point& p, double slack) const {
  for (int a = 0; a < dim; ++a) {
    if (p[a] < lower[a] - slack || p[a] > upper[a] + slack) return false;
  }
  return true;
}

ChartForm::ChartForm(const BoxChart& chart, int degree) : chart_(chart), degree_(degree) {
  if (chart.dim < 1 || chart.dim > 3) throw Error("chart dimension must be 1..3");
  if (chart.nodes < 2) throw Error("chart needs at least two nodes per axis");
  if (degree < 0 || degree > chart.dim) throw Error("form degree out of range for chart");
  components_.assign(forms::binomial(chart.dim, degree), std::vector<double>(chart.size(), 0.0));
  for (int a = 0; a < chart.dim; ++a)
    for (int j = 0; j < chart.nodes; ++j) nodeCoordinates_[a].push_back(chart.nodeCoordinate(a, j));
}

ChartForm ChartForm::sample(const BoxChart& chart, int degree, const FormSampler& sampler) {
  ChartForm form(chart, degree);
  std::vector<double> buf(form.componentCount());
  for (std::size_t p = 0; p < chart.size(); ++p) {
    sampler(chart.node(p), buf);
    for (std::size_t c = 0; c < buf.size(); ++c) form.components_[c][p] = buf[c];
  }
  return form;
}

ChartForm ChartForm::restrictTorusForm(const BoxChart& chart, const forms::KForm& form) {
  if (chart.dim != form.dim()) throw Error("chart and torus dimensions differ");
  std::vector<forms::TrigInterpolant> interps;
  for (std::size_t c = 0; c < form.componentCount(); ++c) interps.emplace_back(form.component(c));
  return sample(chart, form.degree(), [&](const Point& p, std::span<double> out) {
    for (std::size_t c = 0; c < interps.size(); ++c) out[c] = interps[c].value(p);
  });
}

void ChartForm::evaluate(const Point& p, std::span<double> out) const {
  const int n = chart_.dim;
  const int m = chart_.nodes;
  thread_local std::array<std::vector<double>, 3> w;
  for (int a = 0; a < n; ++a) axisWeights(nodeCoordinates_[a], p[a], w[a]);
  for (std::size_t c = 0; c < components_.size(); ++c) {
    const auto& v = components_[c];
    double sum = 0.0;
    if (n == 1) {
      for (int i = 0; i < m; ++i) sum += w[0][i] * v[i];
    } else if (n == 2) {
      for (int i = 0; i < m; ++i) {
        if (w[0][i] == 0.0) continue;
        double row = 0.0;
        for (int j = 0; j < m; ++j) row += w[1][j] * v[i * m + j];
        sum += w[0][i] * row;
      }
    } else {
      for (int i = 0; i < m; ++i) {
        if (w[0][i] == 0.0) continue;
        double plane = 0.0;
        for (int j = 0; j < m; ++j) {
          if (w[1][j] == 0.0) continue;
          const double* line = &v[(static_cast<std::size_t>(i) * m + j) * m];
          double row = 0.0;
          for (int l = 0; l < m; ++l) row += w[2][l] * line[l];
          plane += w[1][j] * row;
        }
        sum += w[0][i] * plane;
      }
    }
    out[c] = sum;
  }
}

double ChartForm::supNorm() const {
  double best = 0.0;
  std::vector<double> buf(components_.size());
  for (std::size_t p = 0; p < chart_.size(); ++p) {
    for (std::size_t c = 0; c < buf.size(); ++c) buf[c] = components_[c][p];
    best = std::max(best, flatOperatorNorm(chart_.dim, degree_, buf));
  }
  return best;
}

ChartForm chartExteriorDerivative(const ChartForm& form) {
  const auto& chart = form.chart();
  const int n = chart.dim;
  const int k = form.degree();
  if (k >= n) throw Error("top-degree form");
  const int m = chart.nodes;

  // partial[c][axis] = d/dx_axis of component c at every node.
  std::vector<std::vector<std::vector<double>>> partial(form.componentCount());
  for (std::size_t c = 0; c < form.componentCount(); ++c) {
    partial[c].assign(n, std::vector<double>(chart.size(), 0.0));
    const auto& v = form.component(c);
    for (int axis = 0; axis < n; ++axis) {
      const Eigen::MatrixXd d = differentiationMatrix(chart, axis);
      std::size_t stride = 1;
      for (int a = axis + 1; a < n; ++a) stride *= m;
      for (std::size_t p = 0; p < chart.size(); ++p) {
        const int i = chart.unflatten(p)[axis];
        const std::size_t base = p - static_cast<std::size_t>(i) * stride;
        double s = 0.0;
        for (int j = 0; j < m; ++j) s += d(i, j) * v[base + j * stride];
        partial[c][axis][p] = s;
      }
    }
  }

  ChartForm out(chart, k + 1);
  const auto& outputs = forms::multiIndices(n, k + 1);
  for (std::size_t o = 0; o < outputs.size(); ++o) {
    const auto& idx = outputs[o];
    for (int a = 0; a <= k; ++a) {
      std::vector<int> rest = idx;
      rest.erase(rest.begin() + a);
      const int pos = forms::multiIndexPosition(n, rest);
      const double sign = a % 2 == 0 ? 1.0 : -1.0;
      const auto& src = partial[pos][idx[a]];
      auto& dst = out.component(o);
      for (std::size_t p = 0; p < chart.size(); ++p) dst[p] += sign * src[p];
    }
  }
  return out;
}

double flatOperatorNorm(int d, int k, std::span<const double> components) {
  if (k == 0 || k == d) return std::abs(components[0]);
  if (k == 1 || k == d - 1) {
    // A flat star is an isometry onto 1-forms, whose norm is Euclidean.
    double s = 0.0;
    for (double c : components) s += c * c;
    return std::sqrt(s);
  }
  if (k == 2) {
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(d, d);
    const auto& idx = forms::multiIndices(d, 2);
    for (std::size_t c = 0; c < idx.size(); ++c) {
      a(idx[c][0], idx[c][1]) = components[c];
      a(idx[c][1], idx[c][0]) = -components[c];
    }
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(a);
    return svd.singularValues()(0);
  }
  throw Error("flat operator norm not implemented for k = " + std::to_string(k) +
              " in dimension " + std::to_string(d));
}

}  // namespace xsect::projection
