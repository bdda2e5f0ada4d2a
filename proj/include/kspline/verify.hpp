#pragma once

#include "kspline/instance.hpp"
#include "kspline/interpolation.hpp"

#include <vector>

namespace kspline {

/// Aggregated outcome of one named structural check across instances.
struct CheckOutcome {
  std::string name;
  std::size_t pass = 0;
  std::size_t fail = 0;
  std::size_t skipped = 0;
  std::string first_failure;  ///< detail for the first failing assertion

  bool ok() const { return fail == 0; }
};

struct VerifySummary {
  std::vector<CheckOutcome> checks;
  std::size_t instances = 0;

  CheckOutcome& at(const std::string& name);
  bool all_pass() const;
};

/// Runs every structural identity the instance supports and merges the
/// outcomes into `summary`.  Checks that need a parameter value are skipped
/// when the instance carries none (and when the constraint form is
/// one-signed, since the interval machinery requires an indefinite form).
///
/// The checks cover: adjoint involution and its interaction with
/// pseudoinverses, double orthogonal companions, the regular+nonnegative
/// characterization of uniform positivity, neutral-cone positivity versus
/// the admissible interval, interval membership on a parameter grid, the
/// Monte-Carlo endpoint bracket, the normal equation with minimality /
/// flatness / gradient conditions, unboundedness outside the interval,
/// the data-admissibility collapse, the global-solvability dichotomy, the
/// lifted-range structure suite, the constrained decomposition identities,
/// uniform positivity under nondegeneracy, constrained optimality, and the
/// two bridge certificates with the equality case.
void verify_instance(const InstanceFile& file, const ToleranceProfile& tol,
                     std::uint64_t seed, VerifySummary& summary);

/// Generates `count` seed-derived random instances (a deterministic mix of
/// regimes, mostly indefinite) and verifies each.  Identical arguments give
/// an identical summary.
VerifySummary verify_random(std::size_t count, Index dims, std::uint64_t seed);

}  // namespace kspline
