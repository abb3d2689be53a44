#include "xsect/section/periods.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "xsect/error.hpp"
#include "xsect/forms/operators.hpp"

namespace xsect::section {

using forms::KForm;
using forms::VectorField;

namespace {

double pairingSup(const std::vector<double>& d, const VectorField& x) {
  double best = 0.0;
  for (std::size_t p = 0; p < x.domain().size(); ++p) {
    double v = 0.0;
    for (int i = 0; i < x.dim(); ++i) v += d[i] * x[i][p];
    best = std::max(best, std::abs(v));
  }
  return best;
}

bool primitive(const std::vector<long long>& k) {
  long long g = 0;
  for (long long v : k) g = std::gcd(g, std::llabs(v));
  return g == 1;
}

PeriodData finish(PeriodData pd, const KForm& omega, const VectorField& x) {
  const int n = x.dim();
  std::vector<double> d(n);
  for (int i = 0; i < n; ++i) d[i] = pd.scale * static_cast<double>(pd.k[i]) - pd.c[i];
  pd.perturbation = KForm::constant(x.domain(), 1, d);
  pd.perturbationPairingSup = pairingSup(d, x);
  pd.minPairing = forms::pair(omega + pd.perturbation, x).min();
  return pd;
}

}  // namespace

std::vector<double> periods(const KForm& omega, double tol) {
  if (omega.degree() != 1) throw Error("periods need a 1-form");
  const auto& domain = omega.domain();
  const int n = domain.dim();
  std::vector<double> c(n);
  for (int i = 0; i < n; ++i) {
    c[i] = omega.component(i).mean();
    // Trapezoid rule along the loop t -> t e_i, exact for trigonometric polynomials.
    double loop = 0.0;
    std::array<int, 3> idx{0, 0, 0};
    for (int j = 0; j < domain.resolution(i); ++j) {
      idx[i] = j;
      loop += omega.component(i)[domain.flatten(idx)];
    }
    loop /= domain.resolution(i);
    if (std::abs(loop - c[i]) > tol) {
      throw Error("form not closed enough: period " + std::to_string(i) + " mean " + std::to_string(c[i]) +
                  " vs loop integral " + std::to_string(loop));
    }
  }
  return c;
}

PeriodData rationalizePeriods(const KForm& omega, const VectorField& x, double budget,
                              const RationalizeOptions& options) {
  const int n = x.dim();
  PeriodData pd{periods(omega), {}, 1, 1.0, false, KForm(x.domain(), 1), 0.0, budget, 0.0};

  if (options.classHint) {
    const auto& k = *options.classHint;
    if (static_cast<int>(k.size()) != n) throw Error("class hint has the wrong dimension");
    double kc = 0.0, kk = 0.0;
    for (int i = 0; i < n; ++i) {
      kc += static_cast<double>(k[i]) * pd.c[i];
      kk += static_cast<double>(k[i]) * static_cast<double>(k[i]);
    }
    if (kk == 0.0) throw Error("class hint is zero");
    if (!(kc > 0.0)) throw Error("class hint rejected: k.c <= 0");
    pd.k = k;
    pd.scale = kc / kk;
    pd.fromHint = true;
    pd = finish(std::move(pd), omega, x);
    if (!(pd.minPairing > options.positivityMargin)) {
      throw Error("class hint rejected: omega'(X) min " + std::to_string(pd.minPairing) +
                  " not above positivity margin");
    }
    return pd;
  }

  double s = 0.0;
  for (double v : pd.c) s = std::max(s, std::abs(v));
  if (s == 0.0) throw Error("periods vanish: no integral class to rationalize");
  std::vector<double> ct(n);
  for (int i = 0; i < n; ++i) ct[i] = pd.c[i] / s;

  double xSup[3] = {0.0, 0.0, 0.0};
  for (int i = 0; i < n; ++i) xSup[i] = x[i].maxAbs();

  auto roundClass = [&](long long q) {
    std::vector<long long> k(n);
    for (int i = 0; i < n; ++i) k[i] = std::llround(static_cast<double>(q) * ct[i]);
    return k;
  };
  auto accept = [&](long long q, std::vector<long long> k) {
    pd.q = q;
    pd.k = std::move(k);
    pd.scale = s / static_cast<double>(q);
    pd = finish(std::move(pd), omega, x);
    return pd;
  };

  for (long long q = 1; q <= std::min<long long>(1000, options.qMax); ++q) {
    const auto k = roundClass(q);
    bool exact = true;
    for (int i = 0; i < n; ++i) exact = exact && std::abs(static_cast<double>(k[i]) / q - ct[i]) <= 1e-9;
    if (exact && primitive(k)) return accept(q, k);
  }

  std::vector<double> d(n);
  for (long long q = 1; q <= options.qMax; ++q) {
    const auto k = roundClass(q);
    if (!primitive(k)) continue;
    double bound = 0.0;
    for (int i = 0; i < n; ++i) {
      d[i] = s * (static_cast<double>(k[i]) / q - ct[i]);
      bound += std::abs(d[i]) * xSup[i];
    }
    if (bound <= budget || pairingSup(d, x) <= budget) return accept(q, k);
  }
  throw Error("no q <= " + std::to_string(options.qMax) + " meets the perturbation budget");
}

}  // namespace xsect::section
