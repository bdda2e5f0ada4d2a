#pragma once

#include "kspline/types.hpp"

#include <utility>

namespace kspline {

class Subspace;
struct RankFactorization;
RankFactorization rank_factor(const Matrix& m, const ToleranceProfile& tol);

/// A linear subspace of C^n, stored as a matrix whose columns form an
/// orthonormal basis (Euclidean inner product).  dim() == 0 is the zero
/// subspace and is a valid value everywhere.
///
/// Invariant: basis().adjoint() * basis() == identity to machine precision.
class Subspace {
 public:
  Subspace() = default;

  static Subspace zero(Index ambient_dim);
  static Subspace full(Index ambient_dim);

  /// Span of the given columns.  Orthonormalizes and drops numerically
  /// dependent columns using the rank_rtol cutoff.
  static Subspace from_columns(const Matrix& columns, const ToleranceProfile& tol);

  /// Adopts a basis that is already orthonormal; verifies the invariant
  /// against residual_tol and throws ValidationError if it fails.
  static Subspace from_orthonormal(Matrix basis, const ToleranceProfile& tol);

  Index ambient_dim() const { return ambient_dim_; }
  Index dim() const { return basis_.cols(); }
  const Matrix& basis() const { return basis_; }

  /// Euclidean orthogonal projection of x onto the subspace.
  Vector project(const Vector& x) const;

  /// Euclidean distance from x to the subspace.
  double distance(const Vector& x) const;

  /// Membership test: distance(x) <= residual_tol * max(1, |x|).
  bool contains(const Vector& x, const ToleranceProfile& tol) const;

  /// Inclusion test: every basis vector of other is contained in *this.
  bool contains(const Subspace& other, const ToleranceProfile& tol) const;

 private:
  friend RankFactorization rank_factor(const Matrix&, const ToleranceProfile&);

  // Adopt a basis that is orthonormal by construction (factorization output).
  static Subspace from_orthonormal_unsafe(Index ambient, Matrix basis) {
    return Subspace(ambient, std::move(basis));
  }

  Subspace(Index ambient, Matrix basis)
      : ambient_dim_(ambient), basis_(std::move(basis)) {}

  Index ambient_dim_ = 0;
  Matrix basis_;  // ambient_dim_ x dim, orthonormal columns
};

/// Rank-revealing decomposition of a matrix: the numerical rank together
/// with orthonormal bases of the column space and the (right) null space.
struct RankFactorization {
  Index rank = 0;
  Subspace col_space;   // subspace of the codomain
  Subspace null_space;  // subspace of the domain
};

/// SVD-based rank factorization.  Singular values <= rank_rtol * sigma_max
/// count as zero; the zero matrix has rank 0.
RankFactorization rank_factor(const Matrix& m, const ToleranceProfile& tol);

/// Moore-Penrose pseudoinverse with the same singular-value cutoff as
/// rank_factor, so rank decisions agree across the library.
Matrix pseudoinverse(const Matrix& m, const ToleranceProfile& tol);

/// Sum, intersection, Euclidean orthogonal complement.  All throw
/// ValidationError on ambient dimension mismatch.
Subspace subspace_sum(const Subspace& a, const Subspace& b, const ToleranceProfile& tol);
Subspace subspace_intersect(const Subspace& a, const Subspace& b, const ToleranceProfile& tol);
Subspace euclid_complement(const Subspace& s, const ToleranceProfile& tol);

/// Equal dimensions and mutual inclusion within residual_tol.
bool subspace_equal(const Subspace& a, const Subspace& b, const ToleranceProfile& tol);

/// Largest principal angle between two subspaces, in radians.  Computed
/// from projection defects (sine form), which stays accurate near zero
/// where the cosine form loses half the significant digits.  Subspaces of
/// different dimension are maximally apart: returns pi/2.
double max_principal_angle(const Subspace& a, const Subspace& b);

// --- Hermitian helpers used throughout ---

/// (m + m^H) / 2.
Matrix hermitize(const Matrix& m);

/// max |m - m^H| entry <= tol * max(1, |m|).
bool is_hermitian(const Matrix& m, double tol);

/// Eigenvalues of a (hermitized) matrix, ascending.
RealVector hermitian_eigenvalues(const Matrix& m);

/// Eigenvalues ascending plus the matching unitary eigenvector matrix.
std::pair<RealVector, Matrix> hermitian_eigensystem(const Matrix& m);

double lambda_min_hermitian(const Matrix& m);

/// Throws ValidationError if any entry is NaN or infinite.
void require_finite(const Matrix& m, const char* what);

}  // namespace kspline
