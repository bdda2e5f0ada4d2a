#include "kspline/smoothing.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace kspline {

namespace {

// V# for a Euclidean domain: V# = V^H G_E.
Matrix v_sharp(const ProblemData& data) { return data.V.adjoint() * data.E.gram(); }

}  // namespace

void SmoothingProblem::validate() const {
  data.validate();
  if (!std::isfinite(rho)) throw ValidationError("SmoothingProblem: rho must be finite");
  require_finite(z0, "SmoothingProblem::z0");
  if (z0.size() != data.E.dim()) {
    throw ValidationError("SmoothingProblem: z0 dimension does not match dim(E)");
  }
}

KreinSpace product_space(const KreinSpace& k, const KreinSpace& e, double rho) {
  if (rho == 0.0) {
    throw ValidationError(
        "product_space: rho = 0 makes the product inner product degenerate");
  }
  const Index nk = k.dim();
  const Index ne = e.dim();
  Matrix gram = Matrix::Zero(nk + ne, nk + ne);
  gram.topLeftCorner(nk, nk) = k.gram();
  gram.bottomRightCorner(ne, ne) = rho * e.gram();
  ToleranceProfile tol;
  return KreinSpace(std::move(gram), tol);
}

Matrix lift_L(const ProblemData& data) {
  Matrix l(data.K.dim() + data.E.dim(), data.h_dim());
  l << data.T, data.V;
  return l;
}

const char* to_string(SmoothStatus s) {
  switch (s) {
    case SmoothStatus::Solvable: return "SOLVABLE";
    case SmoothStatus::DegenerateRho: return "DEGENERATE_RHO";
    case SmoothStatus::PencilNotPsd: return "PENCIL_NOT_PSD";
    case SmoothStatus::RhsNotInRange: return "RHS_NOT_IN_RANGE";
  }
  return "?";
}

const char* to_string(Solvability s) {
  switch (s) {
    case Solvability::AllOfE: return "ALL_OF_E";
    case Solvability::Proper: return "PROPER";
  }
  return "?";
}

ExistenceReport smoothing_exists(const SmoothingProblem& p) {
  p.validate();
  ExistenceReport out;
  if (p.rho == 0.0) {
    out.status = SmoothStatus::DegenerateRho;
    out.message = "rho = 0: degenerate inner product on the product space";
    return out;
  }
  const GramPair gp = build_grams(p.data);
  const Matrix pencil = hermitize(gp.A + p.rho * gp.B);
  out.pencil_lambda_min = lambda_min_hermitian(pencil);
  if (out.pencil_lambda_min < -p.data.tol.psd_tol) {
    out.status = SmoothStatus::PencilNotPsd;
    std::ostringstream msg;
    msg << "parameter outside admissible interval: lambda_min(A + rho B) = "
        << out.pencil_lambda_min;
    out.message = msg.str();
    return out;
  }
  const Vector rhs = v_sharp(p.data) * p.z0;
  const Subspace range = rank_factor(pencil, p.data.tol).col_space;
  out.range_distance = range.distance(rhs);
  if (out.range_distance > p.data.tol.residual_tol * std::max(1.0, rhs.norm())) {
    out.status = SmoothStatus::RhsNotInRange;
    std::ostringstream msg;
    msg << "z0 not admissible: V# z0 misses R(A + rho B) by " << out.range_distance;
    out.message = msg.str();
    return out;
  }
  out.exists = true;
  out.status = SmoothStatus::Solvable;
  out.message = "solvable";
  return out;
}

SmoothingSolution solve_smoothing(const SmoothingProblem& p) {
  SmoothingSolution out;
  out.existence = smoothing_exists(p);
  if (!out.existence.exists) return out;

  const GramPair gp = build_grams(p.data);
  const Matrix pencil = hermitize(gp.A + p.rho * gp.B);
  const Vector rhs = p.rho * (v_sharp(p.data) * p.z0);
  out.manifold.particular = pseudoinverse(pencil, p.data.tol) * rhs;
  out.manifold.directions = rank_factor(pencil, p.data.tol).null_space;

  const double residual = (pencil * out.manifold.particular - rhs).norm();
  if (residual > p.data.tol.residual_tol * std::max(1.0, rhs.norm())) {
    throw NumericalError("solve_smoothing: normal-equation residual exceeded tolerance");
  }
  return out;
}

double objective(const SmoothingProblem& p, const Vector& x) {
  if (x.size() != p.data.h_dim()) {
    throw ValidationError("objective: x dimension does not match the domain");
  }
  const Vector tx = p.data.T * x;
  const Vector vr = p.data.V * x - p.z0;
  return p.data.K.self_inner(tx) + p.rho * p.data.E.self_inner(vr);
}

bool residual_orthogonality(const SmoothingProblem& p, const Vector& x) {
  p.validate();
  if (p.rho == 0.0) {
    throw ValidationError("residual_orthogonality: rho = 0 has no product space");
  }
  if (x.size() != p.data.h_dim()) {
    throw ValidationError("residual_orthogonality: x dimension does not match the domain");
  }
  const KreinSpace prod = product_space(p.data.K, p.data.E, p.rho);
  const Matrix l = lift_L(p.data);
  Vector target = Vector::Zero(l.rows());
  target.tail(p.data.E.dim()) = p.z0;
  const Vector r = l * x - target;
  double worst = 0.0;
  for (Index i = 0; i < p.data.h_dim(); ++i) {
    worst = std::max(worst, std::abs(prod.inner(r, l.col(i))));
  }
  const double scale = std::max(1.0, (p.rho * (v_sharp(p.data) * p.z0)).norm());
  return worst <= p.data.tol.residual_tol * scale;
}

bool admissible_membership(const ProblemData& data, double rho, const Vector& z) {
  data.validate();
  if (rho == 0.0) throw ValidationError("admissible_membership: rho must be nonzero");
  if (z.size() != data.E.dim()) {
    throw ValidationError("admissible_membership: z dimension does not match dim(E)");
  }
  const GramPair gp = build_grams(data);
  const Matrix pencil = hermitize(gp.A + rho * gp.B);
  const Vector rhs = v_sharp(data) * z;
  const Subspace range = rank_factor(pencil, data.tol).col_space;
  return range.distance(rhs) <= data.tol.residual_tol * std::max(1.0, rhs.norm());
}

Solvability global_solvability(const ProblemData& data, double rho) {
  data.validate();
  if (rho == 0.0) throw ValidationError("global_solvability: rho must be nonzero");
  const GramPair gp = build_grams(data);
  const Matrix pencil = hermitize(gp.A + rho * gp.B);
  const Subspace range = rank_factor(pencil, data.tol).col_space;
  // N(T)^perp = R(T^H), and likewise for V.
  const Subspace nt_perp = rank_factor(data.T.adjoint(), data.tol).col_space;
  const Subspace nv_perp = rank_factor(data.V.adjoint(), data.tol).col_space;
  const Subspace target = subspace_sum(nt_perp, nv_perp, data.tol);
  return subspace_equal(range, target, data.tol) ? Solvability::AllOfE : Solvability::Proper;
}

bool StructureReport::all_pass() const {
  for (const auto& c : checks) {
    if (!c.pass) return false;
  }
  return true;
}

StructureReport verify_structure(const ProblemData& data, double rho,
                                 std::size_t trials, std::uint64_t seed) {
  data.validate();
  if (rho == 0.0) throw ValidationError("verify_structure: rho must be nonzero");
  const ToleranceProfile& tol = data.tol;
  const GramPair gp = build_grams(data);
  const Matrix pencil = hermitize(gp.A + rho * gp.B);
  const KreinSpace prod = product_space(data.K, data.E, rho);
  const Matrix l = lift_L(data);
  const Subspace range_l = rank_factor(l, tol).col_space;
  const Subspace null_pencil = rank_factor(pencil, tol).null_space;
  Rng rng(seed);
  StructureReport rep;

  {  // (a) the isotropic part of R(L) is the lift of the pencil kernel
    const Subspace iso = isotropic_part(prod, range_l, tol);
    const Subspace lifted_null =
        Subspace::from_columns(l * null_pencil.basis(), tol);
    const bool pass = subspace_equal(iso, lifted_null, tol);
    std::ostringstream detail;
    detail << "dim isotropic = " << iso.dim() << ", dim lifted kernel = "
           << lifted_null.dim();
    rep.checks.push_back({"isotropic_range_identity", pass, detail.str()});
  }

  {  // (b) membership in R(L) + companion vs the shifted criterion
    const Subspace companion = orthogonal_companion(prod, range_l, tol);
    const Subspace sum = subspace_sum(range_l, companion, tol);
    const Matrix tdag = pseudoinverse(data.T, tol);
    const Subspace v_null =
        Subspace::from_columns(data.V * null_pencil.basis(), tol);
    const Subspace criterion = orthogonal_companion(data.E, v_null, tol);
    bool pass = true;
    std::ostringstream detail;
    std::size_t inside = 0;
    for (std::size_t t = 0; t < trials; ++t) {
      Vector yz(l.rows());
      if (t % 2 == 0 && sum.dim() > 0) {
        yz = sum.basis() * rng.gaussian_vector(sum.dim());
      } else {
        yz = rng.gaussian_vector(l.rows());
      }
      const Vector y = yz.head(data.K.dim());
      const Vector z = yz.tail(data.E.dim());
      const bool lhs = sum.contains(yz, tol);
      const bool rhs = criterion.contains(z - data.V * (tdag * y), tol);
      if (lhs) ++inside;
      if (lhs != rhs) {
        pass = false;
        detail << "disagreement at trial " << t << " (in-sum=" << lhs
               << ", criterion=" << rhs << "); ";
        break;
      }
    }
    detail << inside << "/" << trials << " draws inside the sum";
    rep.checks.push_back({"sum_membership_criterion", pass, detail.str()});
  }

  {  // (c) pencil PSD <=> R(L) nonnegative (exact and sampled)
    const double lmin = lambda_min_hermitian(pencil);
    const bool psd = lmin >= -tol.psd_tol;
    const SubspaceClass cls = classify_subspace(prod, range_l, tol);
    const bool nonneg_exact = cls.definiteness == Definiteness::Positive ||
                              cls.definiteness == Definiteness::Nonnegative ||
                              cls.definiteness == Definiteness::Neutral;
    bool nonneg_sampled = true;
    double worst = std::numeric_limits<double>::infinity();
    const std::size_t draws = std::max<std::size_t>(trials, 16);
    for (std::size_t t = 0; t < draws; ++t) {
      const Vector x = rng.gaussian_vector(data.h_dim());
      const Vector lx = l * x;
      const double denom = lx.squaredNorm();
      if (denom < 1e-24) continue;
      const double val = prod.inner(lx, lx).real() / denom;
      worst = std::min(worst, val);
    }
    nonneg_sampled = worst >= -tol.psd_tol;
    const bool pass = (psd == nonneg_exact) && (psd == nonneg_sampled);
    std::ostringstream detail;
    detail << "lambda_min = " << lmin << ", classification = "
           << to_string(cls.definiteness) << ", sampled worst quotient = " << worst;
    rep.checks.push_back({"range_nonnegativity_equivalence", pass, detail.str()});
  }

  {  // (d) closedness facts that finite dimension settles by itself
    rep.checks.push_back({"closedness_automatic", true,
                          "all ranges and sums of subspaces are closed in finite dimension"});
  }

  return rep;
}

}  // namespace kspline
