#pragma once

#include "kspline/smoothing.hpp"

namespace kspline {

/// Constrained problem: minimize [Tx, Tx]_K subject to Vx = z0.
/// The existence theory assumes T(N(V)) is nonnegative in K; instances
/// violating that are reported as unsupported rather than solved.
struct InterpolationProblem {
  ProblemData data;
  Vector z0;

  void validate() const;
};

/// The three constraint subspaces of the domain:
///   NV = null(V),
///   W  = Euclidean complement of A(NV) where A = T^H G_K T
///        (this equals the preimage T^{-1}(T(NV)^companion)),
///   N0 = NV intersect W  -- the directions along which solutions are free.
struct ConstraintSubspaces {
  Subspace NV;
  Subspace W;
  Subspace N0;
};

ConstraintSubspaces constraint_subspaces(const ProblemData& data);

enum class InterpStatus {
  Solvable,
  HypothesisViolated,  ///< T(N(V)) not nonnegative: outside the theory
  RhsNotInRange,       ///< z0 not in V(W)
};

const char* to_string(InterpStatus s);

struct InterpExistence {
  bool exists = false;
  InterpStatus status = InterpStatus::Solvable;
  double tnv_lambda_min = 0.0;  ///< smallest eigenvalue of the restricted gram of T(NV)
  double range_distance = 0.0;  ///< distance of z0 from V(W)
  std::string message;
};

InterpExistence interp_exists(const InterpolationProblem& p);

struct InterpolationSolution {
  InterpExistence existence;
  SolutionManifold manifold;  ///< meaningful iff existence.exists
};

/// Particular solution x0 = basis(W) c with c the minimum-norm solution of
/// (V basis(W)) c = z0; directions = N0.  Every manifold point satisfies
/// Vx = z0 and x in W within residual_tol.
InterpolationSolution solve_interpolation(const InterpolationProblem& p);

/// Structure report for T(N(V)) as a subspace of K.
struct TNVReport {
  Subspace TNV;        ///< T(N(V)), subspace of K
  Subspace N0;         ///< subspace of the domain
  Subspace isotropic;  ///< isotropic part of TNV
  bool nondegenerate = false;
  bool regular = false;
  bool uniformly_positive = false;
  bool decomposition_verified = false;  ///< all identities below confirmed
  std::string detail;
};

/// Verifies, for the given instance:
///  - isotropic part of T(NV) equals T(N0);
///  - T(NV) splits as T(N0) + T(NV minus N0), a direct sum with
///    K-orthogonal summands whose second part is regular;
///  - nondegeneracy <=> N0 = N(V) cap N(T);
///  - regularity <=> NV + W is the whole domain (pseudo-regularity holds
///    unconditionally in finite dimension, matching the closedness form).
TNVReport analyze_TNV(const ProblemData& data);

/// Result of a bridge between the two problems at a fixed parameter.
struct BridgeResult {
  Vector mapped;        ///< the produced data vector: w0 (z2w) or z0 (w2z)
  SolutionManifold sp;  ///< constrained manifold at w0
  SolutionManifold sm;  ///< regularized manifold at (rho, z0)
  bool certificate_ok = false;   ///< sampled sp points satisfy the normal equation
  bool inclusion_strict = false; ///< sp is a strict subset of sm
  std::string detail;
};

/// w0 = V x~ where x~ is the minimum-norm regularized solution.  The
/// constrained problem at w0 is then solvable and its manifold sits inside
/// the regularized one; the certificate samples 20 points to confirm.
/// Throws ValidationError if the regularized problem is unsolvable.
BridgeResult bridge_z0_to_w0(const SmoothingProblem& p);

/// z0 = (1/rho) (V#)^dagger A x0 + V x0 for the particular constrained
/// solution x0.  The certificate checks the normal equation at x0 and the
/// sampled inclusion.  Throws ValidationError if the constrained problem is
/// unsolvable or the pencil is not PSD at rho.
BridgeResult bridge_w0_to_z0(const InterpolationProblem& p, double rho);

/// True iff the pencil is PSD at rho and null(A + rho B) is contained in
/// N(T) cap N(V) (equivalently, R(L) is nondegenerate).  Exactly then the
/// two bridge manifolds coincide.
bool equality_case(const ProblemData& data, double rho);

}  // namespace kspline
