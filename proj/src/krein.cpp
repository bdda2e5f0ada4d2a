#include "kspline/krein.hpp"

#include <cmath>

namespace kspline {

KreinSpace KreinSpace::hilbert(Index dim) {
  ToleranceProfile tol;
  return KreinSpace(Matrix::Identity(dim, dim), tol);
}

KreinSpace::KreinSpace(Matrix gram, const ToleranceProfile& tol) {
  tol.validate();
  require_finite(gram, "KreinSpace");
  if (gram.rows() != gram.cols()) {
    throw ValidationError("KreinSpace: gram matrix not square");
  }
  if (gram.rows() == 0) {
    throw ValidationError("KreinSpace: gram matrix is empty");
  }
  if (!is_hermitian(gram, tol.residual_tol)) {
    throw ValidationError("KreinSpace: gram matrix not Hermitian");
  }
  gram_ = hermitize(gram);
  const RealVector ev = hermitian_eigenvalues(gram_);
  for (Index i = 0; i < ev.size(); ++i) {
    if (std::abs(ev(i)) <= tol.psd_tol) {
      throw ValidationError("KreinSpace: gram matrix numerically singular");
    }
    (ev(i) > 0.0 ? n_plus_ : n_minus_) += 1;
  }
  lu_.compute(gram_);
}

Complex KreinSpace::inner(const Vector& x, const Vector& y) const {
  if (x.size() != dim() || y.size() != dim()) {
    throw ValidationError("KreinSpace::inner: vector dimension mismatch");
  }
  return (y.adjoint() * gram_ * x)(0, 0);
}

double KreinSpace::self_inner(const Vector& x) const { return inner(x, x).real(); }

Matrix KreinSpace::gram_solve(const Matrix& rhs) const {
  if (rhs.rows() != dim()) {
    throw ValidationError("KreinSpace::gram_solve: dimension mismatch");
  }
  return lu_.solve(rhs);
}

VectorClass classify_vector(const KreinSpace& space, const Vector& x,
                            const ToleranceProfile& tol) {
  const double norm2 = x.squaredNorm();
  if (norm2 == 0.0) {
    throw ValidationError("classify_vector: zero vector has no class");
  }
  const double q = space.self_inner(x);
  if (std::abs(q) <= tol.psd_tol * norm2) return VectorClass::Neutral;
  return q > 0.0 ? VectorClass::Positive : VectorClass::Negative;
}

Matrix krein_adjoint(const Matrix& t, const KreinSpace& dom, const KreinSpace& cod) {
  require_finite(t, "krein_adjoint");
  if (t.cols() != dom.dim() || t.rows() != cod.dim()) {
    throw ValidationError("krein_adjoint: operator shape does not match the spaces");
  }
  return dom.gram_solve(t.adjoint() * cod.gram());
}

Subspace orthogonal_companion(const KreinSpace& space, const Subspace& m,
                              const ToleranceProfile& tol) {
  if (m.ambient_dim() != space.dim()) {
    throw ValidationError("orthogonal_companion: ambient dimension mismatch");
  }
  if (m.dim() == 0) return Subspace::full(space.dim());
  // [m, y] = 0 for all m in M  <=>  (G * basis)^H y = 0.
  const Matrix gm = space.gram() * m.basis();
  return rank_factor(gm.adjoint(), tol).null_space;
}

Subspace isotropic_part(const KreinSpace& space, const Subspace& m,
                        const ToleranceProfile& tol) {
  return subspace_intersect(m, orthogonal_companion(space, m, tol), tol);
}

const char* to_string(Definiteness d) {
  switch (d) {
    case Definiteness::Positive: return "positive";
    case Definiteness::Nonnegative: return "nonnegative";
    case Definiteness::Negative: return "negative";
    case Definiteness::Nonpositive: return "nonpositive";
    case Definiteness::Neutral: return "neutral";
    case Definiteness::Indefinite: return "indefinite";
  }
  return "?";
}

const char* to_string(VectorClass c) {
  switch (c) {
    case VectorClass::Positive: return "positive";
    case VectorClass::Negative: return "negative";
    case VectorClass::Neutral: return "neutral";
  }
  return "?";
}

SubspaceClass classify_subspace(const KreinSpace& space, const Subspace& m,
                                const ToleranceProfile& tol) {
  if (m.ambient_dim() != space.dim()) {
    throw ValidationError("classify_subspace: ambient dimension mismatch");
  }
  SubspaceClass out;
  if (m.dim() == 0) {
    // The zero subspace: trivially neutral, nondegenerate and regular.
    out.definiteness = Definiteness::Neutral;
    out.nondegenerate = true;
    out.regular = true;
    out.uniformly_positive = true;
    out.uniformly_negative = true;
    return out;
  }
  const Matrix restricted = hermitize(m.basis().adjoint() * space.gram() * m.basis());
  const RealVector ev = hermitian_eigenvalues(restricted);
  const double lmin = ev(0);
  const double lmax = ev(ev.size() - 1);
  const bool any_pos = lmax > tol.psd_tol;
  const bool any_neg = lmin < -tol.psd_tol;
  if (any_pos && any_neg) {
    out.definiteness = Definiteness::Indefinite;
  } else if (!any_pos && !any_neg) {
    out.definiteness = Definiteness::Neutral;
  } else if (any_pos) {
    out.definiteness = lmin > tol.psd_tol ? Definiteness::Positive : Definiteness::Nonnegative;
  } else {
    out.definiteness = lmax < -tol.psd_tol ? Definiteness::Negative : Definiteness::Nonpositive;
  }
  out.uniformly_positive = lmin > tol.psd_tol;
  out.uniformly_negative = lmax < -tol.psd_tol;

  const Subspace companion = orthogonal_companion(space, m, tol);
  const Subspace iso = subspace_intersect(m, companion, tol);
  out.isotropic_dim = iso.dim();
  out.nondegenerate = iso.dim() == 0;
  out.regular = subspace_sum(m, companion, tol).dim() == space.dim();
  return out;
}

}  // namespace kspline
