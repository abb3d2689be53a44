#pragma once

#include <optional>
#include <vector>

#include "xsect/forms/fields.hpp"

namespace xsect::section {

/// Component means of a closed 1-form, cross-checked against line integrals
/// along the coordinate loops through the origin.
std::vector<double> periods(const forms::KForm& omega, double tol = 1e-8);

struct RationalizeOptions {
  long long qMax = 1'000'000;
  std::optional<std::vector<long long>> classHint;
  double positivityMargin = 1e-6;  ///< hint acceptance threshold
};

/// omega' = omega + perturbation has harmonic part scale * k.
/// For a searched class, scale = |c|_inf / q.
struct PeriodData {
  std::vector<double> c;
  std::vector<long long> k;
  long long q = 1;
  double scale = 1.0;
  bool fromHint = false;
  forms::KForm perturbation;
  double perturbationPairingSup = 0.0;
  double budget = 0.0;
  double minPairing = 0.0;  ///< min over the grid of omega'(X)
};

/// Chooses an integral class k near the periods of omega.
///
/// With a hint, k is the hint, scale is the least-squares fit (k.c)/|k|^2,
/// and the hint is accepted iff omega'(X) > positivityMargin everywhere.
/// Otherwise c is normalized by its sup norm; an exact rational with q <= 1000
/// is taken if one exists, else the smallest q <= qMax whose rounded,
/// primitive k keeps sup |perturbation(X)| <= budget.
PeriodData rationalizePeriods(const forms::KForm& omega, const forms::VectorField& x, double budget,
                              const RationalizeOptions& options = {});

}  // namespace xsect::section
