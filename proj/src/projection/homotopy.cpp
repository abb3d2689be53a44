#include "xsect/projection/homotopy.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <numbers>

#include "xsect/error.hpp"

namespace xsect::projection {

namespace {

// Product multi-index J (over t, x_1..x_n) -> base index with t removed, if present.
bool splitTime(const std::vector<int>& j, std::vector<int>& base) {
  base.clear();
  bool hasT = false;
  for (int a : j) {
    if (a == 0)
      hasT = true;
    else
      base.push_back(a - 1);
  }
  return hasT;
}

void requireChart(const BoxChart& chart, const Point& center) {
  for (int a = 0; a < chart.dim; ++a) {
    if (chart.upper[a] - chart.lower[a] >= 1.0) throw Error("not contractible");
    if (chart.upper[a] <= chart.lower[a]) throw Error("empty chart axis");
  }
  if (!chart.contains(center)) throw Error("contraction center outside chart");
}

}  // namespace

Quadrature Quadrature::gaussLegendre(int count) {
  if (count < 1) throw Error("quadrature needs at least one node");
  Quadrature q;
  q.nodes.resize(count);
  q.weights.resize(count);
  for (int i = 0; i < count; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (count + 0.5));
    double dp = 1.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= count; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = count * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    // Ascending order on [0, 1].
    q.nodes[count - 1 - i] = 0.5 * (1.0 + x);
    q.weights[count - 1 - i] = 1.0 / ((1.0 - x * x) * dp * dp);
  }
  return q;
}

ProductForm::ProductForm(const BoxChart& c, const Quadrature& q, int deg)
    : chart(c), t(q), degree(deg) {
  if (deg < 0 || deg > c.dim + 1) throw Error("form degree out of range for cylinder");
  components.assign(forms::binomial(c.dim + 1, deg), std::vector<double>(sampleCount(), 0.0));
}

CylinderForm cylinderDecompose(const ProductForm& form) {
  const int n = form.chart.dim;
  const int k = form.degree;
  CylinderForm out{form.chart, form.t, k, {}, {}};
  if (k <= n) out.omega0.assign(forms::binomial(n, k), std::vector<double>(form.sampleCount(), 0.0));
  if (k >= 1) out.eta.assign(forms::binomial(n, k - 1), std::vector<double>(form.sampleCount(), 0.0));
  const auto& idx = forms::multiIndices(n + 1, k);
  std::vector<int> base;
  for (std::size_t c = 0; c < idx.size(); ++c) {
    // dt leads every sorted index that contains it, so dt ^ dx^I needs no sign.
    if (splitTime(idx[c], base))
      out.eta[forms::multiIndexPosition(n, base)] = form.components[c];
    else
      out.omega0[forms::multiIndexPosition(n, base)] = form.components[c];
  }
  return out;
}

ProductForm CylinderForm::reassemble() const {
  const int n = chart.dim;
  ProductForm out(chart, t, degree);
  const auto& idx = forms::multiIndices(n + 1, degree);
  std::vector<int> base;
  for (std::size_t c = 0; c < idx.size(); ++c) {
    if (splitTime(idx[c], base))
      out.components[c] = eta[forms::multiIndexPosition(n, base)];
    else
      out.components[c] = omega0[forms::multiIndexPosition(n, base)];
  }
  return out;
}

double CylinderForm::supNorm() const {
  const ProductForm full = reassemble();
  std::vector<double> buf(full.components.size());
  double best = 0.0;
  for (std::size_t s = 0; s < full.sampleCount(); ++s) {
    for (std::size_t c = 0; c < buf.size(); ++c) buf[c] = full.components[c][s];
    best = std::max(best, flatOperatorNorm(chart.dim + 1, degree, buf));
  }
  return best;
}

ChartForm homotopyOperator(const CylinderForm& form) {
  if (form.degree < 1) throw Error("homotopy operator needs degree >= 1");
  ChartForm out(form.chart, form.degree - 1);
  const std::size_t m = form.chart.size();
  for (std::size_t c = 0; c < form.eta.size(); ++c) {
    auto& dst = out.component(c);
    for (int q = 0; q < form.t.size(); ++q) {
      const double w = form.t.weights[q];
      const double* src = form.eta[c].data() + q * m;
      for (std::size_t p = 0; p < m; ++p) dst[p] += w * src[p];
    }
  }
  return out;
}

namespace {

double smallDeterminant(const Eigen::MatrixXd& m) {
  switch (m.rows()) {
    case 1:
      return m(0, 0);
    case 2:
      return m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0);
    case 3:
      return m(0, 0) * (m(1, 1) * m(2, 2) - m(1, 2) * m(2, 1)) - m(0, 1) * (m(1, 0) * m(2, 2) - m(1, 2) * m(2, 0)) +
             m(0, 2) * (m(1, 0) * m(2, 1) - m(1, 1) * m(2, 0));
    default:
      return m.determinant();
  }
}

}  // namespace

ProductForm radialPullback(const ChartForm& xi, const Point& center, const Quadrature& t) {
  const BoxChart& chart = xi.chart();
  const int n = chart.dim;
  const int k = xi.degree();
  ProductForm out(chart, t, k);
  const auto& src = forms::multiIndices(n, k);
  const auto& dst = forms::multiIndices(n + 1, k);
  const std::size_t m = chart.size();
  std::vector<double> vals(src.size());
  Eigen::MatrixXd jac(n, n + 1);
  Eigen::MatrixXd sub(k, k);
  for (int q = 0; q < t.size(); ++q) {
    const double tq = t.nodes[q];
    for (std::size_t p = 0; p < m; ++p) {
      const Point x = chart.node(p);
      Point h{0.0, 0.0, 0.0};
      jac.setZero();
      for (int a = 0; a < n; ++a) {
        h[a] = center[a] + tq * (x[a] - center[a]);
        jac(a, 0) = x[a] - center[a];
        jac(a, a + 1) = tq;
      }
      xi.evaluate(h, vals);
      const std::size_t s = q * m + p;
      for (std::size_t j = 0; j < dst.size(); ++j) {
        double sum = 0.0;
        for (std::size_t i = 0; i < src.size(); ++i) {
          if (vals[i] == 0.0) continue;
          if (k == 0) {
            sum += vals[i];
            continue;
          }
          for (int r = 0; r < k; ++r)
            for (int c = 0; c < k; ++c) sub(r, c) = jac(src[i][r], dst[j][c]);
          sum += vals[i] * smallDeterminant(sub);
        }
        out.components[j][s] = sum;
      }
    }
  }
  return out;
}

HomotopyResidual verifyHomotopyFormula(const ChartForm& xi, const Point& center,
                                       int quadratureNodes) {
  const BoxChart& chart = xi.chart();
  requireChart(chart, center);
  if (xi.degree() < 1) throw Error("homotopy formula needs degree >= 1");
  const Quadrature q = Quadrature::gaussLegendre(quadratureNodes);

  const ChartForm hxi = homotopyOperator(cylinderDecompose(radialPullback(xi, center, q)));
  ChartForm rebuilt = chartExteriorDerivative(hxi);
  if (xi.degree() < chart.dim) {
    const ChartForm dxi = chartExteriorDerivative(xi);
    const ChartForm hdxi = homotopyOperator(cylinderDecompose(radialPullback(dxi, center, q)));
    for (std::size_t c = 0; c < rebuilt.componentCount(); ++c) {
      auto& r = rebuilt.component(c);
      const auto& h = hdxi.component(c);
      for (std::size_t p = 0; p < r.size(); ++p) r[p] += h[p];
    }
  }

  HomotopyResidual report;
  report.quadratureNodes = quadratureNodes;
  report.xiNorm = xi.supNorm();
  report.homotopyNorm = hxi.supNorm();
  for (std::size_t c = 0; c < xi.componentCount(); ++c) {
    const auto& a = xi.component(c);
    const auto& b = rebuilt.component(c);
    for (std::size_t p = 0; p < a.size(); ++p)
      report.residual = std::max(report.residual, std::abs(a[p] - b[p]));
  }
  return report;
}

HomotopyResidual verifyHomotopyFormula(const forms::KForm& xi, const BoxChart& chart,
                                       const Point& center, int quadratureNodes) {
  requireChart(chart, center);
  return verifyHomotopyFormula(ChartForm::restrictTorusForm(chart, xi), center, quadratureNodes);
}

}  // namespace xsect::projection
