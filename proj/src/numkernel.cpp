#include "kspline/numkernel.hpp"

#include <algorithm>
#include <cmath>

namespace kspline {

void require_finite(const Matrix& m, const char* what) {
  if (!m.allFinite()) {
    throw ValidationError(std::string(what) + ": non-finite entry");
  }
}

Matrix hermitize(const Matrix& m) { return 0.5 * (m + m.adjoint()); }

bool is_hermitian(const Matrix& m, double tol) {
  if (m.rows() != m.cols()) return false;
  if (m.size() == 0) return true;
  const double defect = (m - m.adjoint()).cwiseAbs().maxCoeff();
  const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
  return defect <= tol * scale;
}

RealVector hermitian_eigenvalues(const Matrix& m) {
  if (m.rows() != m.cols()) throw ValidationError("hermitian_eigenvalues: matrix not square");
  if (m.rows() == 0) return RealVector(0);
  Eigen::SelfAdjointEigenSolver<Matrix> es(hermitize(m), Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) throw NumericalError("hermitian_eigenvalues: eigensolver failed");
  return es.eigenvalues();
}

std::pair<RealVector, Matrix> hermitian_eigensystem(const Matrix& m) {
  if (m.rows() != m.cols()) throw ValidationError("hermitian_eigensystem: matrix not square");
  if (m.rows() == 0) return {RealVector(0), Matrix(0, 0)};
  Eigen::SelfAdjointEigenSolver<Matrix> es(hermitize(m));
  if (es.info() != Eigen::Success) throw NumericalError("hermitian_eigensystem: eigensolver failed");
  return {es.eigenvalues(), es.eigenvectors()};
}

double lambda_min_hermitian(const Matrix& m) {
  const RealVector ev = hermitian_eigenvalues(m);
  return ev.size() == 0 ? 0.0 : ev(0);
}

// ---- Subspace ----

Subspace Subspace::zero(Index ambient_dim) {
  if (ambient_dim < 0) throw ValidationError("Subspace::zero: negative dimension");
  return Subspace(ambient_dim, Matrix(ambient_dim, 0));
}

Subspace Subspace::full(Index ambient_dim) {
  if (ambient_dim < 0) throw ValidationError("Subspace::full: negative dimension");
  return Subspace(ambient_dim, Matrix::Identity(ambient_dim, ambient_dim));
}

Subspace Subspace::from_columns(const Matrix& columns, const ToleranceProfile& tol) {
  require_finite(columns, "Subspace::from_columns");
  return rank_factor(columns, tol).col_space;
}

Subspace Subspace::from_orthonormal(Matrix basis, const ToleranceProfile& tol) {
  require_finite(basis, "Subspace::from_orthonormal");
  const Index ambient = basis.rows();
  if (basis.cols() > 0) {
    const Matrix gram = basis.adjoint() * basis;
    const double defect =
        (gram - Matrix::Identity(basis.cols(), basis.cols())).cwiseAbs().maxCoeff();
    if (defect > tol.residual_tol) {
      throw ValidationError("Subspace::from_orthonormal: columns not orthonormal");
    }
  }
  return Subspace(ambient, std::move(basis));
}

Vector Subspace::project(const Vector& x) const {
  if (x.size() != ambient_dim_) throw ValidationError("Subspace::project: dimension mismatch");
  if (dim() == 0) return Vector::Zero(ambient_dim_);
  return basis_ * (basis_.adjoint() * x);
}

double Subspace::distance(const Vector& x) const { return (x - project(x)).norm(); }

bool Subspace::contains(const Vector& x, const ToleranceProfile& tol) const {
  const double scale = std::max(1.0, x.norm());
  return distance(x) <= tol.residual_tol * scale;
}

bool Subspace::contains(const Subspace& other, const ToleranceProfile& tol) const {
  if (other.ambient_dim() != ambient_dim_) {
    throw ValidationError("Subspace::contains: ambient dimension mismatch");
  }
  for (Index j = 0; j < other.dim(); ++j) {
    if (!contains(other.basis().col(j), tol)) return false;
  }
  return true;
}

// ---- rank factorization / pseudoinverse ----

RankFactorization rank_factor(const Matrix& m, const ToleranceProfile& tol) {
  require_finite(m, "rank_factor");
  const Index rows = m.rows();
  const Index cols = m.cols();
  if (rows == 0 || cols == 0) {
    return {0, Subspace::zero(rows), Subspace::full(cols)};
  }
  Eigen::JacobiSVD<Matrix> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  const double cutoff = tol.rank_rtol * sv(0);
  Index rank = 0;
  while (rank < sv.size() && sv(rank) > cutoff) ++rank;
  RankFactorization out;
  out.rank = rank;
  out.col_space = Subspace::from_orthonormal_unsafe(rows, svd.matrixU().leftCols(rank));
  out.null_space = Subspace::from_orthonormal_unsafe(cols, svd.matrixV().rightCols(cols - rank));
  return out;
}

Matrix pseudoinverse(const Matrix& m, const ToleranceProfile& tol) {
  require_finite(m, "pseudoinverse");
  if (m.rows() == 0 || m.cols() == 0) return Matrix::Zero(m.cols(), m.rows());
  Eigen::JacobiSVD<Matrix> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto& sv = svd.singularValues();
  const double cutoff = tol.rank_rtol * sv(0);
  RealVector inv = RealVector::Zero(sv.size());
  for (Index i = 0; i < sv.size(); ++i) {
    if (sv(i) > cutoff) inv(i) = 1.0 / sv(i);
  }
  return svd.matrixV() * inv.asDiagonal() * svd.matrixU().adjoint();
}

// ---- subspace algebra ----

namespace {
void require_same_ambient(const Subspace& a, const Subspace& b, const char* what) {
  if (a.ambient_dim() != b.ambient_dim()) {
    throw ValidationError(std::string(what) + ": ambient dimension mismatch");
  }
}
}  // namespace

Subspace subspace_sum(const Subspace& a, const Subspace& b, const ToleranceProfile& tol) {
  require_same_ambient(a, b, "subspace_sum");
  if (a.dim() == 0) return b;
  if (b.dim() == 0) return a;
  Matrix stacked(a.ambient_dim(), a.dim() + b.dim());
  stacked << a.basis(), b.basis();
  return rank_factor(stacked, tol).col_space;
}

Subspace subspace_intersect(const Subspace& a, const Subspace& b, const ToleranceProfile& tol) {
  require_same_ambient(a, b, "subspace_intersect");
  if (a.dim() == 0 || b.dim() == 0) return Subspace::zero(a.ambient_dim());
  // Null space of [Ua  -Ub]: a coefficient pair (u, v) with Ua u = Ub v.
  // The mapped vectors Ua u_j inherit orthogonality up to a fixed factor
  // 1/2 (both halves of a unit null vector carry equal norm), so the final
  // re-orthonormalization never drops dimensions.
  Matrix stacked(a.ambient_dim(), a.dim() + b.dim());
  stacked << a.basis(), -b.basis();
  const Subspace ns = rank_factor(stacked, tol).null_space;
  if (ns.dim() == 0) return Subspace::zero(a.ambient_dim());
  const Matrix coeff_a = ns.basis().topRows(a.dim());
  return Subspace::from_columns(a.basis() * coeff_a, tol);
}

Subspace euclid_complement(const Subspace& s, const ToleranceProfile& tol) {
  if (s.dim() == 0) return Subspace::full(s.ambient_dim());
  return rank_factor(s.basis().adjoint(), tol).null_space;
}

bool subspace_equal(const Subspace& a, const Subspace& b, const ToleranceProfile& tol) {
  require_same_ambient(a, b, "subspace_equal");
  if (a.dim() != b.dim()) return false;
  return a.contains(b, tol) && b.contains(a, tol);
}

double max_principal_angle(const Subspace& a, const Subspace& b) {
  if (a.ambient_dim() != b.ambient_dim()) {
    throw ValidationError("max_principal_angle: ambient dimension mismatch");
  }
  if (a.dim() != b.dim()) return std::numbers::pi / 2.0;
  if (a.dim() == 0) return 0.0;
  const auto defect = [](const Subspace& from, const Subspace& onto) {
    // Largest singular value of (I - P_onto) * basis(from) = sin(theta_max).
    const Matrix residual = from.basis() - onto.basis() * (onto.basis().adjoint() * from.basis());
    Eigen::JacobiSVD<Matrix> svd(residual);
    return svd.singularValues().size() == 0 ? 0.0 : svd.singularValues()(0);
  };
  const double s = std::max(defect(a, b), defect(b, a));
  return std::asin(std::clamp(s, 0.0, 1.0));
}

}  // namespace kspline
