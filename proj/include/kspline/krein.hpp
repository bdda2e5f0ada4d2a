#pragma once

#include "kspline/numkernel.hpp"

namespace kspline {

/// Finite-dimensional indefinite inner-product space: C^n equipped with a
/// Hermitian invertible gram matrix G.  The inner product is linear in the
/// FIRST argument and conjugate-linear in the second:
///
///   [x, y] = y^H G x.
///
/// G = I recovers the Euclidean space; an indefinite G yields positive,
/// negative and neutral vectors.
class KreinSpace {
 public:
  /// Euclidean space of the given dimension (G = I).
  static KreinSpace hilbert(Index dim);

  /// Validates Hermitian-ness (within residual_tol) and invertibility
  /// (smallest |eigenvalue| > psd_tol), throwing ValidationError otherwise.
  /// The stored gram is the hermitized copy of the input.
  KreinSpace(Matrix gram, const ToleranceProfile& tol);

  Index dim() const { return gram_.rows(); }
  const Matrix& gram() const { return gram_; }

  /// Numbers of positive / negative eigenvalues of the gram.
  Index n_plus() const { return n_plus_; }
  Index n_minus() const { return n_minus_; }
  bool positive_definite() const { return n_minus_ == 0; }

  /// [x, y] = y^H G x.
  Complex inner(const Vector& x, const Vector& y) const;

  /// Real part of [x, x] (the imaginary part vanishes up to rounding).
  double self_inner(const Vector& x) const;

  /// G^{-1} * rhs via the stored factorization.
  Matrix gram_solve(const Matrix& rhs) const;

 private:
  Matrix gram_;
  Eigen::FullPivLU<Matrix> lu_;
  Index n_plus_ = 0;
  Index n_minus_ = 0;
};

enum class VectorClass { Positive, Negative, Neutral };

/// Sign of [x, x] with a psd_tol * |x|^2 neutral band.  Rejects x = 0.
VectorClass classify_vector(const KreinSpace& space, const Vector& x,
                            const ToleranceProfile& tol);

/// Adjoint of t : dom -> cod with respect to the indefinite products:
/// [t x, y]_cod = [x, t# y]_dom for all x, y.  t# = G_dom^{-1} t^H G_cod.
Matrix krein_adjoint(const Matrix& t, const KreinSpace& dom, const KreinSpace& cod);

/// Orthogonal companion of a subspace M: all vectors y with [m, y] = 0 for
/// every m in M.  Equals the Euclidean complement of G * M, hence has
/// dimension dim(space) - dim(M), but need not be a direct complement.
Subspace orthogonal_companion(const KreinSpace& space, const Subspace& m,
                              const ToleranceProfile& tol);

/// Isotropic part M intersect M^[perp]; nonzero exactly when the product
/// degenerates on M.
Subspace isotropic_part(const KreinSpace& space, const Subspace& m,
                        const ToleranceProfile& tol);

enum class Definiteness { Positive, Nonnegative, Negative, Nonpositive, Neutral, Indefinite };

const char* to_string(Definiteness d);
const char* to_string(VectorClass c);

/// Classification report for a subspace of a Krein space.  In finite
/// dimension every subspace is pseudo-regular, so that flag is constant.
struct SubspaceClass {
  Definiteness definiteness = Definiteness::Neutral;
  bool nondegenerate = false;       ///< isotropic part is zero
  bool regular = false;             ///< M + M^[perp] is the whole space
  bool uniformly_positive = false;  ///< restricted gram has lambda_min > psd_tol
  bool uniformly_negative = false;
  bool pseudo_regular = true;       ///< always true in finite dimension
  Index isotropic_dim = 0;
};

SubspaceClass classify_subspace(const KreinSpace& space, const Subspace& m,
                                const ToleranceProfile& tol);

}  // namespace kspline
