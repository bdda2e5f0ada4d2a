#pragma once

#include "kspline/pencil.hpp"

#include <string>
#include <vector>

namespace kspline {

/// Regularized problem: minimize [Tx, Tx]_K + rho [Vx - z0, Vx - z0]_E
/// over the whole domain, for a fixed real parameter rho != 0.
struct SmoothingProblem {
  ProblemData data;
  double rho = 0.0;
  Vector z0;

  void validate() const;
};

/// The product space K x E carrying the gram block-diag(G_K, rho * G_E).
/// This is a valid (invertible) indefinite product exactly when rho != 0;
/// rho == 0 throws ValidationError("degenerate...").
KreinSpace product_space(const KreinSpace& k, const KreinSpace& e, double rho);

/// The stacked operator [T; V] : H -> K x E.  Its kernel is
/// N(T) cap N(V), and its product-space adjoint satisfies
/// L# L = A + rho B.
Matrix lift_L(const ProblemData& data);

enum class SmoothStatus {
  Solvable,       ///< both existence clauses hold
  DegenerateRho,  ///< rho == 0: the product gram is singular
  PencilNotPsd,   ///< lambda_min(A + rho B) < -psd_tol: rho not admissible
  RhsNotInRange,  ///< V# z0 is not in R(A + rho B): z0 not admissible
};

const char* to_string(SmoothStatus s);

/// Existence diagnosis.  The two substantive clauses are pencil positive
/// semidefiniteness and range membership of V# z0; they are reported
/// separately so a caller can tell which one failed.
struct ExistenceReport {
  bool exists = false;
  SmoothStatus status = SmoothStatus::Solvable;
  double pencil_lambda_min = 0.0;  ///< lambda_min(A + rho B)
  double range_distance = 0.0;     ///< Euclidean distance of V# z0 from R(A + rho B)
  std::string message;
};

ExistenceReport smoothing_exists(const SmoothingProblem& p);

/// An affine solution set: particular + span(directions).
struct SolutionManifold {
  Vector particular;
  Subspace directions;
};

struct SmoothingSolution {
  ExistenceReport existence;
  SolutionManifold manifold;  ///< meaningful iff existence.exists
};

/// Minimum-norm particular solution x = rho (A + rho B)^dagger V# z0 with
/// directions = null(A + rho B).  Unsolvable input is not an exception:
/// the report carries the diagnosis and the manifold stays empty.
SmoothingSolution solve_smoothing(const SmoothingProblem& p);

/// The objective functional; real because both forms are Hermitian.
double objective(const SmoothingProblem& p, const Vector& x);

/// First-order optimality via the indefinite product: checks
/// [Lx - (0, z0), L e_i]_rho = 0 for every standard basis vector e_i of
/// the domain, within residual_tol (scaled by the right-hand side).  By
/// adjunction this is the normal equation assembled along a second route.
bool residual_orthogonality(const SmoothingProblem& p, const Vector& x);

/// Is z admissible data at this parameter, i.e. V# z in R(A + rho B)?
bool admissible_membership(const ProblemData& data, double rho, const Vector& z);

enum class Solvability {
  AllOfE,  ///< every z0 is admissible; directions collapse to N(T) cap N(V)
  Proper,  ///< the admissible set is a proper subspace of E
};

const char* to_string(Solvability s);

/// Decides whether R(A + rho B) equals N(T)^perp + N(V)^perp (Euclidean
/// complements in the domain).  Equality is equivalent to solvability for
/// every right-hand side z0.
Solvability global_solvability(const ProblemData& data, double rho);

struct StructureCheck {
  std::string name;
  bool pass = true;
  std::string detail;
};

struct StructureReport {
  std::vector<StructureCheck> checks;
  bool all_pass() const;
};

/// Structural identities of the lifted range at a fixed parameter:
///   (a) isotropic part of R(L) equals L(null(A + rho B));
///   (b) membership of (y, z) in R(L) + R(L)^companion agrees with the
///       shifted criterion  z - V T^dagger y  in  V(null(A + rho B))^companion,
///       for `trials` draws, half of them taken inside the sum so both
///       branches of the equivalence are exercised;
///   (c) pencil PSD <=> restricted product gram of R(L) is PSD <=> sampled
///       values [Lx, Lx]_rho are nonnegative;
///   (d) finite-dimension closedness facts hold by construction.
StructureReport verify_structure(const ProblemData& data, double rho,
                                 std::size_t trials, std::uint64_t seed);

}  // namespace kspline
