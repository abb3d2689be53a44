#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "xsect/forms/scenario.hpp"

namespace xsect::cli {

struct IdentityResult {
  std::string name;
  int samples = 0;
  double residual = 0.0;  ///< worst case over samples
  double tolerance = 0.0;
  bool passed = false;
};

struct IdentitySuiteReport {
  int randomForms = 0;
  double seconds = 0.0;
  std::vector<IdentityResult> results;

  bool passed() const;
  const IdentityResult& result(const std::string& name) const;
};

/// Forms-core and projection identities on the scenario metric, using
/// `randomForms` random band-limited forms and the scenario itself.
///
///   star_star_sign        |**w - (-1)^{k(n-k)} w| / max(1, |w|)
///   star_isometry         |sup|*w| - sup|w|| / max(1, sup|w|), k in {1, n-1}
///   d_d_zero              sup|ddw| / max(1, |w|)
///   star_interior_flat    |*(i_X vol_g) - (-1)^{n-1} X^flat| / max(1, |X^flat|)
///   norm_chain            |sup|delta(i_X vol_g)| - sup|dX^flat|| / max(1, sup|dX^flat|)
///   norm_chain_scenario   same with the scenario's Omega and X
///   homotopy_formula      |xi - dH(H*xi) - H(H*dxi)| on box charts
///   homotopy_norm         sup|H w| / sup|w| - 1 on random cylinder forms
///   proposition_bound     distance - 1.05 dBound (must be <= 1e-12)
///   projection_closed     sup|d omega| / max(1, |theta|)
///   projection_idempotent |P(P theta) - P theta| / max(1, |theta|)
IdentitySuiteReport runIdentitySuite(const forms::Scenario& s, int randomForms = 100, std::uint64_t seed = 1);

}  // namespace xsect::cli
