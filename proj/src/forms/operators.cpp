#include "xsect/forms/operators.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "xsect/error.hpp"
#include "xsect/forms/spectral.hpp"

namespace xsect::forms {

namespace {

/// Minor of a row-major n x n block.
double minorDeterminant(const double* m, int n, const std::vector<int>& rows, const std::vector<int>& cols) {
  auto at = [&](int i, int j) { return m[rows[i] * n + cols[j]]; };
  switch (rows.size()) {
    case 0:
      return 1.0;
    case 1:
      return at(0, 0);
    case 2:
      return at(0, 0) * at(1, 1) - at(0, 1) * at(1, 0);
    default:
      return at(0, 0) * (at(1, 1) * at(2, 2) - at(1, 2) * at(2, 1)) -
             at(0, 1) * (at(1, 0) * at(2, 2) - at(1, 2) * at(2, 0)) +
             at(0, 2) * (at(1, 0) * at(2, 1) - at(1, 1) * at(2, 0));
  }
}

struct StarEntry {
  int output;  // position of the complementary multi-index
  int sign;    // sign of the permutation (I, I^c)
};

std::vector<StarEntry> starTable(int n, int k) {
  std::vector<StarEntry> table;
  for (const auto& idx : multiIndices(n, k)) {
    std::vector<int> complement;
    for (int i = 0; i < n; ++i) {
      if (std::find(idx.begin(), idx.end(), i) == idx.end()) complement.push_back(i);
    }
    std::vector<int> perm = idx;
    perm.insert(perm.end(), complement.begin(), complement.end());
    const int sign = sortWithSign(perm);
    table.push_back({multiIndexPosition(n, complement), sign});
  }
  return table;
}

}  // namespace

KForm exteriorDerivative(const KForm& form) {
  const int n = form.dim();
  const int k = form.degree();
  if (k >= n) throw Error("top-degree form");
  const auto& domain = form.domain();
  const auto& inputs = multiIndices(n, k);
  std::vector<Spectrum> spectra;
  spectra.reserve(inputs.size());
  for (std::size_t c = 0; c < inputs.size(); ++c) spectra.push_back(forwardTransform(form.component(c)));

  // Derivative symbols per axis, indexed by storage position.
  const std::size_t modes = spectra.front().coeffs.size();
  std::vector<std::array<int, 3>> storage(modes);
  for (std::size_t i = 0; i < modes; ++i) storage[i] = spectra.front().unflatten(i);
  std::array<std::vector<std::complex<double>>, 3> symbol;
  for (int a = 0; a < n; ++a) {
    for (int j = 0; j < domain.resolution(a); ++j) symbol[a].push_back(derivativeSymbol(domain, a, j));
  }

  // (dw)_I = sum_a (-1)^a d_{i_a} w_{I \ i_a}, summed in frequency space.
  KForm out(domain, k + 1);
  const auto& outputs = multiIndices(n, k + 1);
  for (std::size_t o = 0; o < outputs.size(); ++o) {
    const auto& idx = outputs[o];
    Spectrum acc{domain, std::vector<std::complex<double>>(modes)};
    for (int a = 0; a <= k; ++a) {
      std::vector<int> rest = idx;
      rest.erase(rest.begin() + a);
      const auto& src = spectra[multiIndexPosition(n, rest)].coeffs;
      const int axis = idx[a];
      const double sign = a % 2 == 0 ? 1.0 : -1.0;
      for (std::size_t i = 0; i < modes; ++i) acc.coeffs[i] += sign * symbol[axis][storage[i][axis]] * src[i];
    }
    out.component(o) = inverseTransform(acc);
  }
  return out;
}

KForm hodgeStar(const KForm& form, const MetricField& g) {
  const int n = form.dim();
  const int k = form.degree();
  if (!(g.domain() == form.domain())) throw Error("metric and form live on different grids");
  const auto& indices = multiIndices(n, k);
  const auto table = starTable(n, k);
  const std::size_t count = indices.size();

  KForm out(form.domain(), n - k);
  const MetricGeometry& geo = g.geometry();
  std::vector<double> raised(count);
  for (std::size_t p = 0; p < form.domain().size(); ++p) {
    const double* inverse = geo.inverse.data() + p * n * n;
    for (std::size_t i = 0; i < count; ++i) {
      double sum = 0.0;
      for (std::size_t j = 0; j < count; ++j) {
        sum += minorDeterminant(inverse, n, indices[i], indices[j]) * form.component(j)[p];
      }
      raised[i] = sum;
    }
    for (std::size_t i = 0; i < count; ++i) {
      out.component(table[i].output)[p] = geo.sqrtDet[p] * table[i].sign * raised[i];
    }
  }
  return out;
}

KForm codifferential(const KForm& form, const MetricField& g) {
  const int n = form.dim();
  const int k = form.degree();
  if (k < 1) throw Error("codifferential of a 0-form");
  const int exponent = n * (k + 1) + 1;
  KForm out = hodgeStar(exteriorDerivative(hodgeStar(form, g)), g);
  if (exponent % 2 != 0) out *= -1.0;
  return out;
}

KForm interiorProduct(const VectorField& x, const KForm& form) {
  const int n = form.dim();
  const int k = form.degree();
  if (k < 1) throw Error("interior product of a 0-form");
  KForm out(form.domain(), k - 1);
  const auto& outputs = multiIndices(n, k - 1);
  for (std::size_t o = 0; o < outputs.size(); ++o) {
    for (int i = 0; i < n; ++i) {
      std::vector<int> idx{i};
      idx.insert(idx.end(), outputs[o].begin(), outputs[o].end());
      const int sign = sortWithSign(idx);
      if (sign == 0) continue;
      const ScalarField term = x[i] * form.component(idx);
      if (sign > 0) {
        out.component(o) += term;
      } else {
        out.component(o) -= term;
      }
    }
  }
  return out;
}

VectorField fluxField(const KForm& canonical, const KForm& omega) {
  const int n = omega.dim();
  if (omega.degree() != n || canonical.degree() != n - 1) throw Error("flux field needs an (n-1)-form and a volume form");
  std::vector<ScalarField> comps(n, ScalarField(omega.domain()));
  const auto& outputs = multiIndices(n, n - 1);
  for (std::size_t o = 0; o < outputs.size(); ++o) {
    std::vector<int> idx = outputs[o];
    int missing = 0;
    while (std::find(idx.begin(), idx.end(), missing) != idx.end()) ++missing;
    idx.insert(idx.begin(), missing);
    const double sign = sortWithSign(idx);
    const auto& rho = omega.component(0);
    const auto& c = canonical.component(o);
    for (std::size_t p = 0; p < rho.size(); ++p) {
      if (!(rho[p] > 0.0)) throw Error("volume form not positive at grid point " + std::to_string(p));
      comps[missing][p] = sign * c[p] / rho[p];
    }
  }
  return VectorField(std::move(comps));
}

KForm flat(const VectorField& x, const MetricField& g) {
  const int n = x.dim();
  KForm out(x.domain(), 1);
  for (std::size_t p = 0; p < x.domain().size(); ++p) {
    for (int i = 0; i < n; ++i) {
      double sum = 0.0;
      for (int j = 0; j < n; ++j) sum += g.entry(p, i, j) * x[j][p];
      out.component(i)[p] = sum;
    }
  }
  return out;
}

ScalarField pair(const KForm& oneForm, const VectorField& x) {
  if (oneForm.degree() != 1) throw Error("pairing needs a 1-form");
  ScalarField out(x.domain());
  for (int i = 0; i < x.dim(); ++i) out += oneForm.component(i) * x[i];
  return out;
}

ScalarField pointwiseNorm(const KForm& form, const MetricField& g) {
  const int n = form.dim();
  const int k = form.degree();
  ScalarField out(form.domain());
  if (k == 0) {
    for (std::size_t p = 0; p < out.size(); ++p) out[p] = std::abs(form.component(0)[p]);
    return out;
  }
  if (!(k == 1 || k == n || (k == 2 && n == 3) || k == n - 1)) {
    throw Error("operator norm not supported for degree " + std::to_string(k) + " on T^" +
                std::to_string(n));
  }
  const MetricGeometry& geo = g.geometry();
  for (std::size_t p = 0; p < out.size(); ++p) {
    const double* lInv = geo.choleskyInverse.data() + p * n * n;
    if (k == n) {
      out[p] = std::abs(form.component(0)[p]) / geo.sqrtDet[p];
    } else if (k == 1) {
      // |L^{-1} a| with L^{-1} lower triangular.
      double sq = 0.0;
      for (int i = 0; i < n; ++i) {
        double b = 0.0;
        for (int j = 0; j <= i; ++j) b += lInv[i * n + j] * form.component(j)[p];
        sq += b * b;
      }
      out[p] = std::sqrt(sq);
    } else {
      // 2-form on T^3: antisymmetric coefficient matrix in the orthonormal coframe.
      Eigen::Matrix3d a = Eigen::Matrix3d::Zero();
      for (std::size_t c = 0; c < 3; ++c) {
        const auto& idx = multiIndices(3, 2)[c];
        const double v = form.component(c)[p];
        a(idx[0], idx[1]) = v;
        a(idx[1], idx[0]) = -v;
      }
      const Eigen::Map<const Eigen::Matrix<double, 3, 3, Eigen::RowMajor>> l(lInv);
      const Eigen::Matrix3d b = l * a * l.transpose();
      out[p] = std::sqrt(b(0, 1) * b(0, 1) + b(0, 2) * b(0, 2) + b(1, 2) * b(1, 2));
    }
  }
  return out;
}

double supNorm(const KForm& form, const MetricField& g) { return pointwiseNorm(form, g).max(); }

SpeedBound minSpeed(const VectorField& x, const MetricField& g) {
  const int n = x.dim();
  double minSq = std::numeric_limits<double>::infinity();
  for (std::size_t p = 0; p < x.domain().size(); ++p) {
    double sq = 0.0;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) sq += g.entry(p, i, j) * x[i][p] * x[j][p];
    if (!(sq > 1e-28)) {
      throw Error("singular vector field at grid point " + std::to_string(p));
    }
    minSq = std::min(minSq, sq);
  }
  return {std::sqrt(minSq), minSq};
}

KForm riemannianVolume(const MetricField& g) {
  KForm out(g.domain(), g.dim());
  const MetricGeometry& geo = g.geometry();
  for (std::size_t p = 0; p < g.domain().size(); ++p) out.component(0)[p] = geo.sqrtDet[p];
  return out;
}

KForm laplaceBeltrami(const KForm& form, const MetricField& g) {
  const int n = form.dim();
  const int k = form.degree();
  if (k == 0) return codifferential(exteriorDerivative(form), g);
  if (k == n) return exteriorDerivative(codifferential(form, g));
  return exteriorDerivative(codifferential(form, g)) + codifferential(exteriorDerivative(form), g);
}

}  // namespace xsect::forms
