#include "kspline/pencil.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace kspline {

void ProblemData::validate() const {
  tol.validate();
  require_finite(T, "ProblemData::T");
  require_finite(V, "ProblemData::V");
  if (T.cols() != V.cols()) {
    throw ValidationError("ProblemData: T and V disagree on the domain dimension");
  }
  if (h_dim() == 0) throw ValidationError("ProblemData: empty domain");
  if (T.rows() != K.dim()) {
    throw ValidationError("ProblemData: T row count does not match dim(K)");
  }
  if (V.rows() != E.dim()) {
    throw ValidationError("ProblemData: V row count does not match dim(E)");
  }
  if (rank_factor(T, tol).rank != T.rows()) {
    throw ValidationError("ProblemData: T is not surjective (row rank deficient)");
  }
  if (rank_factor(V, tol).rank != V.rows()) {
    throw ValidationError("ProblemData: V is not surjective (row rank deficient)");
  }
}

GramPair build_grams(const ProblemData& data) {
  return {hermitize(data.T.adjoint() * data.K.gram() * data.T),
          hermitize(data.V.adjoint() * data.E.gram() * data.V)};
}

Inertia inertia(const Matrix& b, const ToleranceProfile& tol) {
  if (b.rows() != b.cols()) throw ValidationError("inertia: matrix not square");
  const RealVector ev = hermitian_eigenvalues(b);
  Inertia out;
  for (Index i = 0; i < ev.size(); ++i) {
    if (ev(i) > tol.psd_tol) {
      ++out.n_plus;
    } else if (ev(i) < -tol.psd_tol) {
      ++out.n_minus;
    } else {
      ++out.n_zero;
    }
  }
  return out;
}

const char* to_string(IntervalStatus s) {
  switch (s) {
    case IntervalStatus::Empty: return "EMPTY";
    case IntervalStatus::Point: return "POINT";
    case IntervalStatus::Interval: return "INTERVAL";
  }
  return "?";
}

bool AdmissibleInterval::pick_nonzero(double margin, double* rho_out) const {
  if (status == IntervalStatus::Point) {
    if (rho_minus != 0.0) {
      *rho_out = rho_minus;
      return true;
    }
    return false;
  }
  if (status != IntervalStatus::Interval) return false;
  const double w = width();
  const double mid = 0.5 * (rho_minus + rho_plus);
  // mid and the two quartile points cannot all sit near zero; for
  // margin <= 0.25 at least one candidate clears it.
  for (const double cand : {mid, rho_minus + 0.75 * w, rho_minus + 0.25 * w}) {
    if (std::abs(cand) >= margin * w) {
      *rho_out = cand;
      return true;
    }
  }
  return false;
}

AdmissibleInterval admissible_interval(const Matrix& a, const Matrix& b,
                                       const ToleranceProfile& tol) {
  tol.validate();
  require_finite(a, "admissible_interval: A");
  require_finite(b, "admissible_interval: B");
  if (a.rows() != a.cols() || b.rows() != b.cols() || a.rows() != b.rows()) {
    throw ValidationError("admissible_interval: A and B must be square and equally sized");
  }
  const Matrix ah = hermitize(a);
  const Matrix bh = hermitize(b);
  if (!inertia(bh, tol).indefinite()) {
    throw ValidationError(
        "admissible_interval: B is semidefinite; the parameter search requires "
        "an indefinite constraint form");
  }
  const auto g = [&](double rho) { return lambda_min_hermitian(ah + rho * bh); };

  // Since B is indefinite, g(rho) -> -infinity on both sides, and g is
  // concave (pointwise minimum of affine functions of rho).  Bracket the
  // maximum by doubling.
  const double g0 = g(0.0);
  double w = 1.0;
  while (g(-w) >= g0 || g(w) >= g0) {
    w *= 2.0;
    if (w > 1e14) throw NumericalError("admissible_interval: bracket expansion ran away");
  }

  // Ternary search for the maximum over [-w, w]; stop early once any
  // feasible point is certified.
  double lo = -w, hi = w;
  double rho_star = 0.0, g_star = g0;
  const double arg_tol = std::max(tol.bisection_tol, 1e-15 * w);
  while (g_star < 0.0 && hi - lo > arg_tol) {
    const double m1 = lo + (hi - lo) / 3.0;
    const double m2 = hi - (hi - lo) / 3.0;
    const double gm1 = g(m1);
    const double gm2 = g(m2);
    if (gm1 > g_star) { g_star = gm1; rho_star = m1; }
    if (gm2 > g_star) { g_star = gm2; rho_star = m2; }
    if (gm1 < gm2) {
      lo = m1;
    } else {
      hi = m2;
    }
  }

  AdmissibleInterval out;
  if (g_star < -tol.psd_tol) {
    out.status = IntervalStatus::Empty;
    return out;
  }

  const auto feasible = [&](double rho) { return g(rho) >= -tol.psd_tol; };

  const auto endpoint = [&](double direction) {
    double step = std::max(1.0, 0.125 * std::abs(rho_star));
    double inside = rho_star;
    double outside = rho_star + direction * step;
    while (feasible(outside)) {
      inside = outside;
      step *= 2.0;
      outside = rho_star + direction * step;
      if (step > 1e14) throw NumericalError("admissible_interval: endpoint escaped");
    }
    while (std::abs(outside - inside) > tol.bisection_tol) {
      const double mid = 0.5 * (inside + outside);
      (feasible(mid) ? inside : outside) = mid;
    }
    return inside;
  };

  out.rho_plus = endpoint(+1.0);
  out.rho_minus = endpoint(-1.0);

  // A width at tolerance scale is a single admissible parameter, not a
  // genuine interval; report its midpoint.
  const double collapse = 10.0 * std::max(tol.psd_tol, tol.bisection_tol);
  if (out.rho_plus - out.rho_minus <= collapse) {
    const double mid = 0.5 * (out.rho_minus + out.rho_plus);
    out.status = IntervalStatus::Point;
    out.rho_minus = out.rho_plus = mid;
  } else {
    out.status = IntervalStatus::Interval;
  }
  return out;
}

QuotientEstimate quotient_oracle(const Matrix& a, const Matrix& b,
                                 std::size_t sample_count, std::uint64_t seed) {
  require_finite(a, "quotient_oracle: A");
  require_finite(b, "quotient_oracle: B");
  if (a.rows() != a.cols() || b.rows() != b.cols() || a.rows() != b.rows()) {
    throw ValidationError("quotient_oracle: A and B must be square and equally sized");
  }
  if (sample_count == 0) throw ValidationError("quotient_oracle: sample_count must be positive");
  const Matrix ah = hermitize(a);
  const Matrix bh = hermitize(b);
  const Index n = ah.rows();
  const double band = 1e-12 * std::max(1.0, bh.cwiseAbs().maxCoeff());

  Rng rng(seed);
  double inf_pos = std::numeric_limits<double>::infinity();
  double sup_neg = -std::numeric_limits<double>::infinity();
  QuotientEstimate out;
  for (std::size_t k = 0; k < sample_count; ++k) {
    const Vector x = rng.gaussian_vector(n);
    const double q = (x.adjoint() * bh * x)(0, 0).real();
    if (std::abs(q) <= band) continue;
    const double p = (x.adjoint() * ah * x)(0, 0).real();
    if (q > 0.0) {
      ++out.pos_samples;
      inf_pos = std::min(inf_pos, p / q);
    } else {
      ++out.neg_samples;
      sup_neg = std::max(sup_neg, p / q);
    }
  }
  if (out.pos_samples == 0 || out.neg_samples == 0) {
    throw ValidationError(
        "quotient_oracle: no samples of the required sign; the constraint form "
        "appears semidefinite");
  }
  out.rho_minus_est = -inf_pos;
  out.rho_plus_est = -sup_neg;
  return out;
}

namespace {

// Partition sorted eigenvalue indices of one sign class into groups of
// numerically equal values, so degenerate eigenspaces get mixed uniformly.
std::vector<std::vector<Index>> group_equal(const RealVector& ev,
                                            const std::vector<Index>& idx, double scale) {
  std::vector<std::vector<Index>> groups;
  for (const Index i : idx) {
    if (!groups.empty() && std::abs(ev(groups.back().back()) - ev(i)) <= 1e-8 * scale) {
      groups.back().push_back(i);
    } else {
      groups.push_back({i});
    }
  }
  return groups;
}

Vector mix_group(const Matrix& q, const std::vector<Index>& group, Rng& rng) {
  Vector coeff(static_cast<Index>(group.size()));
  for (;;) {
    for (Index i = 0; i < coeff.size(); ++i) coeff(i) = rng.cnormal();
    const double norm = coeff.norm();
    if (norm > 1e-12) {
      coeff /= norm;
      break;
    }
  }
  Vector out = Vector::Zero(q.rows());
  for (std::size_t i = 0; i < group.size(); ++i) out += q.col(group[i]) * coeff(static_cast<Index>(i));
  return out;
}

}  // namespace

std::vector<Vector> neutral_cone_sample(const Matrix& b, std::size_t count,
                                        std::uint64_t seed, const ToleranceProfile& tol) {
  require_finite(b, "neutral_cone_sample");
  if (b.rows() != b.cols()) throw ValidationError("neutral_cone_sample: matrix not square");
  const Matrix bh = hermitize(b);
  const auto [ev, q] = hermitian_eigensystem(bh);
  std::vector<Index> pos, neg, ker;
  for (Index i = 0; i < ev.size(); ++i) {
    if (ev(i) > tol.psd_tol) {
      pos.push_back(i);
    } else if (ev(i) < -tol.psd_tol) {
      neg.push_back(i);
    } else {
      ker.push_back(i);
    }
  }
  if (pos.empty() || neg.empty()) {
    throw ValidationError(
        "neutral_cone_sample: the form is semidefinite, its neutral cone is just "
        "the kernel");
  }
  const double scale = std::max(std::abs(ev(0)), std::abs(ev(ev.size() - 1)));
  const auto pos_groups = group_equal(ev, pos, scale);
  const auto neg_groups = group_equal(ev, neg, scale);

  Rng rng(seed);
  std::vector<Vector> out;
  out.reserve(count);
  for (std::size_t k = 0; k < count; ++k) {
    const Vector u_plus = mix_group(q, pos_groups[rng.index(pos_groups.size())], rng);
    const Vector u_minus = mix_group(q, neg_groups[rng.index(neg_groups.size())], rng);
    const double alpha = (u_plus.adjoint() * bh * u_plus)(0, 0).real();
    const double beta = (u_minus.adjoint() * bh * u_minus)(0, 0).real();
    // alpha > 0 > beta by construction; match the weights so the two
    // contributions cancel exactly: [x, x]_B = alpha - (alpha/-beta) * (-beta).
    const double s = std::sqrt(alpha / -beta);
    const double phi = 2.0 * std::numbers::pi * rng.uniform();
    Vector x = u_plus + s * Complex(std::cos(phi), std::sin(phi)) * u_minus;
    if (!ker.empty() && rng.uniform() < 0.75) {
      for (const Index i : ker) x += q.col(i) * rng.cnormal();
    }
    const double defect = std::abs((x.adjoint() * bh * x)(0, 0).real());
    if (defect > tol.psd_tol * x.squaredNorm()) {
      throw NumericalError("neutral_cone_sample: constructed vector failed the neutrality check");
    }
    out.push_back(std::move(x));
  }
  return out;
}

ConePositivity cone_positivity_test(const ProblemData& data, std::size_t count,
                                    std::uint64_t seed) {
  data.validate();
  if (count == 0) throw ValidationError("cone_positivity_test: count must be positive");
  const GramPair gp = build_grams(data);
  const auto samples = neutral_cone_sample(gp.B, count, seed, data.tol);
  ConePositivity out;
  out.worst_value = std::numeric_limits<double>::infinity();
  for (const Vector& x : samples) {
    const double v = (x.adjoint() * gp.A * x)(0, 0).real() / x.squaredNorm();
    if (v < out.worst_value) {
      out.worst_value = v;
      out.worst_witness = x;
    }
  }
  out.positive = out.worst_value >= -data.tol.psd_tol;
  return out;
}

}  // namespace kspline
