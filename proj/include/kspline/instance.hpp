#pragma once

#include "kspline/pencil.hpp"

#include <optional>
#include <string>

namespace kspline {

/// Random-instance families used by the generator and the batch verifier.
enum class Regime {
  Indefinite,     ///< indefinite constraint form, nonempty parameter interval
  Semidefinite,   ///< definite (one-signed) constraint gram
  EmptyInterval,  ///< indefinite forms with no admissible parameter
};

Regime parse_regime(const std::string& s);
const char* to_string(Regime r);

/// On-disk problem description.  Matrices are stored as nested arrays of
/// [re, im] pairs; the file carries everything needed to reproduce a run
/// (optional parameter, data vectors, tolerances and seed).
struct InstanceFile {
  Matrix k_gram;
  Matrix e_gram;
  Matrix T;
  Matrix V;
  std::optional<double> rho;
  std::optional<Vector> z0;
  std::optional<Vector> w0;
  std::optional<ToleranceProfile> tolerances;
  std::optional<std::uint64_t> seed;

  Index h_dim() const { return T.cols(); }

  /// Strict parse with field-path error messages (throws ValidationError).
  static InstanceFile parse(const std::string& text);
  static InstanceFile load(const std::string& path);

  /// Deterministic rendering; parse(render()) reproduces the instance
  /// exactly (doubles round-trip bit-for-bit).
  std::string render() const;
  void save(const std::string& path) const;

  /// FNV-1a content hash of the canonical rendering, as 16 hex digits.
  std::string digest() const;

  /// Tolerances recorded in the file, or the defaults.
  ToleranceProfile resolve_tolerances() const;

  /// Builds and fully validates the problem (grams Hermitian invertible,
  /// maps surjective).
  ProblemData to_problem(const ToleranceProfile& tol) const;
};

/// Seed-deterministic random instance.  dims is the domain dimension
/// (at least 2).  The INDEFINITE regime guarantees: indefinite constraint
/// form, nonempty admissible interval, a recorded nonzero parameter rho,
/// an admissible z0 and a reachable w0.  SEMIDEFINITE forces a one-signed
/// constraint gram (no rho).  EMPTY_INTERVAL guarantees an empty interval.
InstanceFile gen_instance(Index dims, Regime regime, std::uint64_t seed);

}  // namespace kspline
