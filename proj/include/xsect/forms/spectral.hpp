#pragma once

#include <array>
#include <complex>
#include <vector>

#include "xsect/forms/fields.hpp"

namespace xsect::forms {

/// Half-complex Fourier coefficients of a real grid field (FFTW r2c layout:
/// last axis stores N/2 + 1 entries). Unnormalized forward transform.
struct Spectrum {
  TorusDomain domain;
  std::vector<std::complex<double>> coeffs;

  int halfLength() const { return domain.resolution(domain.dim() - 1) / 2 + 1; }
  /// Per-axis storage indices of a flat half-spectrum index.
  std::array<int, 3> unflatten(std::size_t flat) const;
};

Spectrum forwardTransform(const ScalarField& f);
ScalarField inverseTransform(const Spectrum& s);

/// Signed wavenumber for storage index j on `axis` (range [-N/2, N/2)).
int signedWavenumber(const TorusDomain& domain, int axis, int j);
bool isNyquist(const TorusDomain& domain, int axis, int j);

/// Spectral first derivative; the Nyquist mode's derivative is set to zero so
/// that mixed partials commute exactly.
ScalarField derivative(const ScalarField& f, int axis);
/// All first partials from a single forward transform.
std::vector<ScalarField> gradient(const ScalarField& f);

/// Symbol of the discrete derivative along `axis` at storage index j:
/// 2*pi*i*k, or 0 at the Nyquist index.
std::complex<double> derivativeSymbol(const TorusDomain& domain, int axis, int j);

/// Off-grid evaluation of the trigonometric interpolant of a grid field.
///
/// Modes below a small absolute/relative threshold are discarded, so
/// band-limited fields evaluate in time proportional to their bandwidth.
/// Nyquist modes use cos(pi N x) so the interpolant stays real.
class TrigInterpolant {
 public:
  explicit TrigInterpolant(const ScalarField& f);

  int dim() const { return dim_; }
  std::size_t modeCount() const { return modes_.size(); }
  double value(const Point& x) const;
  /// Value and gradient at x.
  double valueAndGradient(const Point& x, std::array<double, 3>& grad) const;

 private:
  struct Mode {
    std::array<int, 3> k;
    std::array<bool, 3> nyquist;
    std::complex<double> c;
  };
  int dim_;
  std::array<int, 3> resolution_;
  std::array<int, 3> maxWave_{0, 0, 0};
  std::vector<Mode> modes_;
};

}  // namespace xsect::forms
