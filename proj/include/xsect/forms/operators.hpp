#pragma once

#include "xsect/forms/fields.hpp"

namespace xsect::forms {

/// Spectral exterior derivative of a k-form, k < n.
KForm exteriorDerivative(const KForm& form);

/// Pointwise Hodge star for metric g and orientation dx^1 ^ ... ^ dx^n.
/// Satisfies star(star(w)) = (-1)^{k(n-k)} w.
KForm hodgeStar(const KForm& form, const MetricField& g);

/// delta_g = (-1)^{n(k+1)+1} * d *, for k >= 1.
KForm codifferential(const KForm& form, const MetricField& g);

/// Contraction i_X in the first slot, for k >= 1.
KForm interiorProduct(const VectorField& x, const KForm& form);

/// The vector field X with i_X omega = canonical, for a positive volume form.
VectorField fluxField(const KForm& canonical, const KForm& omega);

/// X^flat = g(X, .).
KForm flat(const VectorField& x, const MetricField& g);

/// Pointwise evaluation w(X) of a 1-form on a vector field.
ScalarField pair(const KForm& oneForm, const VectorField& x);

/// Pointwise operator norm |w_p|_g.
///
/// Rules in a g-orthonormal coframe obtained from the Cholesky factor g = L L^T:
/// k = 0 absolute value; k = 1 Euclidean norm of L^{-1} a; k = 2, n = 3
/// spectral norm of L^{-1} A L^{-T}; k = n |coefficient| / sqrt(det g).
ScalarField pointwiseNorm(const KForm& form, const MetricField& g);

/// sup over grid points of pointwiseNorm.
double supNorm(const KForm& form, const MetricField& g);

struct SpeedBound {
  double m;         ///< min over the grid of sqrt(g(X, X))
  double mSquared;  ///< its square
};

/// Throws "singular vector field" when X vanishes at a grid point.
SpeedBound minSpeed(const VectorField& x, const MetricField& g);

/// sqrt(det g) dx^1 ^ ... ^ dx^n.
KForm riemannianVolume(const MetricField& g);

/// Delta_g = d delta_g + delta_g d; the term that does not exist at degree 0
/// or n is omitted.
KForm laplaceBeltrami(const KForm& form, const MetricField& g);

}  // namespace xsect::forms
