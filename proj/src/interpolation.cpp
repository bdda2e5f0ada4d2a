#include "kspline/interpolation.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace kspline {

namespace {

Matrix v_sharp(const ProblemData& data) { return data.V.adjoint() * data.E.gram(); }

Subspace image_of(const Matrix& op, const Subspace& s, const ToleranceProfile& tol) {
  if (s.dim() == 0) return Subspace::zero(op.rows());
  return Subspace::from_columns(op * s.basis(), tol);
}

}  // namespace

void InterpolationProblem::validate() const {
  data.validate();
  require_finite(z0, "InterpolationProblem::z0");
  if (z0.size() != data.E.dim()) {
    throw ValidationError("InterpolationProblem: z0 dimension does not match dim(E)");
  }
}

const char* to_string(InterpStatus s) {
  switch (s) {
    case InterpStatus::Solvable: return "SOLVABLE";
    case InterpStatus::HypothesisViolated: return "HYPOTHESIS_VIOLATED";
    case InterpStatus::RhsNotInRange: return "RHS_NOT_IN_RANGE";
  }
  return "?";
}

ConstraintSubspaces constraint_subspaces(const ProblemData& data) {
  data.validate();
  ConstraintSubspaces out;
  out.NV = rank_factor(data.V, data.tol).null_space;
  const Matrix a = hermitize(data.T.adjoint() * data.K.gram() * data.T);
  if (out.NV.dim() == 0) {
    out.W = Subspace::full(data.h_dim());
  } else {
    const Subspace a_nv = Subspace::from_columns(a * out.NV.basis(), data.tol);
    out.W = euclid_complement(a_nv, data.tol);
  }
  out.N0 = subspace_intersect(out.NV, out.W, data.tol);
  return out;
}

InterpExistence interp_exists(const InterpolationProblem& p) {
  p.validate();
  const ToleranceProfile& tol = p.data.tol;
  const ConstraintSubspaces cs = constraint_subspaces(p.data);
  InterpExistence out;

  // Hypothesis: T(N(V)) nonnegative in K.
  const Subspace tnv = image_of(p.data.T, cs.NV, tol);
  if (tnv.dim() > 0) {
    const Matrix restricted =
        hermitize(tnv.basis().adjoint() * p.data.K.gram() * tnv.basis());
    out.tnv_lambda_min = lambda_min_hermitian(restricted);
    if (out.tnv_lambda_min < -tol.psd_tol) {
      out.status = InterpStatus::HypothesisViolated;
      std::ostringstream msg;
      msg << "T(N(V)) is not nonnegative (lambda_min = " << out.tnv_lambda_min
          << "); the existence theory does not apply";
      out.message = msg.str();
      return out;
    }
  }

  const Subspace vw = image_of(p.data.V, cs.W, tol);
  out.range_distance = vw.distance(p.z0);
  if (out.range_distance > tol.residual_tol * std::max(1.0, p.z0.norm())) {
    out.status = InterpStatus::RhsNotInRange;
    std::ostringstream msg;
    msg << "z0 misses V(W) by " << out.range_distance;
    out.message = msg.str();
    return out;
  }
  out.exists = true;
  out.status = InterpStatus::Solvable;
  out.message = "solvable";
  return out;
}

InterpolationSolution solve_interpolation(const InterpolationProblem& p) {
  InterpolationSolution out;
  out.existence = interp_exists(p);
  if (!out.existence.exists) return out;

  const ToleranceProfile& tol = p.data.tol;
  const ConstraintSubspaces cs = constraint_subspaces(p.data);
  const Matrix vw = p.data.V * cs.W.basis();
  const Vector coeff = pseudoinverse(vw, tol) * p.z0;
  out.manifold.particular = cs.W.basis() * coeff;
  out.manifold.directions = cs.N0;

  const double residual = (p.data.V * out.manifold.particular - p.z0).norm();
  if (residual > tol.residual_tol * std::max(1.0, p.z0.norm())) {
    throw NumericalError("solve_interpolation: constraint residual exceeded tolerance");
  }
  return out;
}

TNVReport analyze_TNV(const ProblemData& data) {
  data.validate();
  const ToleranceProfile& tol = data.tol;
  const ConstraintSubspaces cs = constraint_subspaces(data);
  TNVReport rep;
  rep.N0 = cs.N0;
  rep.TNV = image_of(data.T, cs.NV, tol);
  rep.isotropic = isotropic_part(data.K, rep.TNV, tol);

  const SubspaceClass cls = classify_subspace(data.K, rep.TNV, tol);
  rep.nondegenerate = cls.nondegenerate;
  rep.regular = cls.regular;
  rep.uniformly_positive = cls.uniformly_positive;

  std::ostringstream detail;
  bool ok = true;

  // Isotropic part equals T(N0).
  const Subspace tn0 = image_of(data.T, cs.N0, tol);
  if (!subspace_equal(rep.isotropic, tn0, tol)) {
    ok = false;
    detail << "isotropic part != T(N0); ";
  }

  // Split T(NV) = T(N0) + T(NV minus N0): direct, K-orthogonal summands,
  // second summand regular.
  const Subspace nv_minus_n0 = subspace_intersect(cs.NV, euclid_complement(cs.N0, tol), tol);
  const Subspace second = image_of(data.T, nv_minus_n0, tol);
  if (subspace_sum(tn0, second, tol).dim() != rep.TNV.dim() ||
      tn0.dim() + second.dim() != rep.TNV.dim()) {
    ok = false;
    detail << "decomposition not direct or not exhaustive; ";
  }
  bool orthogonal = true;
  for (Index i = 0; i < tn0.dim() && orthogonal; ++i) {
    for (Index j = 0; j < second.dim(); ++j) {
      if (std::abs(data.K.inner(tn0.basis().col(i), second.basis().col(j))) >
          tol.residual_tol * 10.0) {
        orthogonal = false;
        break;
      }
    }
  }
  if (!orthogonal) {
    ok = false;
    detail << "summands not K-orthogonal; ";
  }
  if (!classify_subspace(data.K, second, tol).regular) {
    ok = false;
    detail << "complement summand not regular; ";
  }

  // Nondegenerate <=> N0 = N(V) cap N(T).
  const Subspace nt = rank_factor(data.T, tol).null_space;
  const Subspace nv_cap_nt = subspace_intersect(cs.NV, nt, tol);
  if (rep.nondegenerate != subspace_equal(cs.N0, nv_cap_nt, tol)) {
    ok = false;
    detail << "nondegeneracy identity failed; ";
  }

  // Regular <=> NV + W is the whole domain.  (Pseudo-regularity is the
  // closedness form of the same sum and holds unconditionally here.)
  const bool sum_full = subspace_sum(cs.NV, cs.W, tol).dim() == data.h_dim();
  if (rep.regular != sum_full) {
    ok = false;
    detail << "regularity identity failed; ";
  }
  if (!cls.pseudo_regular) {
    ok = false;
    detail << "pseudo-regularity flag not constant; ";
  }

  rep.decomposition_verified = ok;
  if (ok) detail << "all identities hold";
  rep.detail = detail.str();
  return rep;
}

namespace {

// Sample `count` points of the affine manifold and check the regularized
// normal equation (A + rho B) x = rho V# z0 at each.
bool inclusion_certificate(const SolutionManifold& manifold, const Matrix& pencil,
                           const Vector& rhs, const ToleranceProfile& tol,
                           std::size_t count, std::uint64_t seed, double* worst_out) {
  Rng rng(seed);
  double worst = 0.0;
  const double scale = std::max(1.0, rhs.norm());
  for (std::size_t k = 0; k < count; ++k) {
    Vector x = manifold.particular;
    if (manifold.directions.dim() > 0) {
      x += manifold.directions.basis() * rng.gaussian_vector(manifold.directions.dim());
    }
    worst = std::max(worst, (pencil * x - rhs).norm());
  }
  if (worst_out != nullptr) *worst_out = worst;
  return worst <= tol.residual_tol * scale;
}

}  // namespace

BridgeResult bridge_z0_to_w0(const SmoothingProblem& p) {
  const SmoothingSolution sm_sol = solve_smoothing(p);
  if (!sm_sol.existence.exists) {
    throw ValidationError(std::string("bridge_z0_to_w0: regularized problem unsolvable: ") +
                          sm_sol.existence.message);
  }
  BridgeResult out;
  out.sm = sm_sol.manifold;
  out.mapped = p.data.V * sm_sol.manifold.particular;

  InterpolationProblem pi{p.data, out.mapped};
  const InterpolationSolution sp_sol = solve_interpolation(pi);
  if (!sp_sol.existence.exists) {
    out.certificate_ok = false;
    out.detail = std::string("constrained problem at w0 unsolvable: ") +
                 sp_sol.existence.message;
    return out;
  }
  out.sp = sp_sol.manifold;

  const GramPair gp = build_grams(p.data);
  const Matrix pencil = hermitize(gp.A + p.rho * gp.B);
  const Vector rhs = p.rho * (p.data.V.adjoint() * p.data.E.gram() * p.z0);
  double worst = 0.0;
  out.certificate_ok =
      inclusion_certificate(out.sp, pencil, rhs, p.data.tol, 20, 20250520, &worst);
  out.inclusion_strict = out.sp.directions.dim() < out.sm.directions.dim();
  std::ostringstream detail;
  detail << "worst sampled normal-equation residual = " << worst
         << (out.inclusion_strict ? "; inclusion strict" : "; manifolds same dimension");
  out.detail = detail.str();
  return out;
}

BridgeResult bridge_w0_to_z0(const InterpolationProblem& p, double rho) {
  if (rho == 0.0) throw ValidationError("bridge_w0_to_z0: rho must be nonzero");
  const GramPair gp = build_grams(p.data);
  const Matrix pencil = hermitize(gp.A + rho * gp.B);
  if (lambda_min_hermitian(pencil) < -p.data.tol.psd_tol) {
    throw ValidationError("bridge_w0_to_z0: pencil not PSD at rho; parameter not admissible");
  }
  const InterpolationSolution sp_sol = solve_interpolation(p);
  if (!sp_sol.existence.exists) {
    throw ValidationError(std::string("bridge_w0_to_z0: constrained problem unsolvable: ") +
                          sp_sol.existence.message);
  }
  BridgeResult out;
  out.sp = sp_sol.manifold;
  const Vector& x0 = sp_sol.manifold.particular;
  const Matrix vs = v_sharp(p.data);
  out.mapped = (1.0 / rho) * (pseudoinverse(vs, p.data.tol) * (gp.A * x0)) + p.data.V * x0;

  SmoothingProblem ps{p.data, rho, out.mapped};
  const SmoothingSolution sm_sol = solve_smoothing(ps);
  if (!sm_sol.existence.exists) {
    out.certificate_ok = false;
    out.detail = std::string("regularized problem at mapped z0 unsolvable: ") +
                 sm_sol.existence.message;
    return out;
  }
  out.sm = sm_sol.manifold;

  const Vector rhs = rho * (vs * out.mapped);
  const double x0_residual = (pencil * x0 - rhs).norm();
  double worst = 0.0;
  const bool sampled_ok =
      inclusion_certificate(out.sp, pencil, rhs, p.data.tol, 20, 20250521, &worst);
  out.certificate_ok =
      sampled_ok && x0_residual <= p.data.tol.residual_tol * std::max(1.0, rhs.norm());
  out.inclusion_strict = out.sp.directions.dim() < out.sm.directions.dim();
  std::ostringstream detail;
  detail << "x0 normal-equation residual = " << x0_residual
         << ", worst sampled = " << worst;
  out.detail = detail.str();
  return out;
}

bool equality_case(const ProblemData& data, double rho) {
  data.validate();
  if (rho == 0.0) throw ValidationError("equality_case: rho must be nonzero");
  const GramPair gp = build_grams(data);
  const Matrix pencil = hermitize(gp.A + rho * gp.B);
  if (lambda_min_hermitian(pencil) < -data.tol.psd_tol) return false;
  const Subspace null_pencil = rank_factor(pencil, data.tol).null_space;
  if (null_pencil.dim() == 0) return true;
  const Subspace nt = rank_factor(data.T, data.tol).null_space;
  const Subspace nv = rank_factor(data.V, data.tol).null_space;
  const Subspace core = subspace_intersect(nt, nv, data.tol);
  return core.contains(null_pencil, data.tol);
}

}  // namespace kspline
