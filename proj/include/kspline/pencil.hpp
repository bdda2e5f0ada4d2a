#pragma once

#include "kspline/krein.hpp"

#include <vector>

namespace kspline {

/// One problem instance: a Euclidean domain C^h, two target spaces with
/// their own (possibly indefinite) products, and a surjective operator into
/// each.  T is the penalty map, V the constraint map.
///
/// Invariants checked by validate(): T and V surjective (full row rank),
/// column counts agree with h_dim, grams valid.
struct ProblemData {
  KreinSpace K;  ///< codomain of T
  KreinSpace E;  ///< codomain of V
  Matrix T;      ///< dim(K) x h
  Matrix V;      ///< dim(E) x h
  ToleranceProfile tol;

  Index h_dim() const { return T.cols(); }
  void validate() const;
};

/// The two Hermitian forms of the pencil: A = T# composed with T pulled to
/// the domain (T^H G_K T) and B likewise for V.  Both are hermitized, so
/// downstream eigensolvers never see asymmetry beyond rounding.
struct GramPair {
  Matrix A;
  Matrix B;
};

GramPair build_grams(const ProblemData& data);

/// Signature of a Hermitian matrix with a psd_tol zero band.
struct Inertia {
  Index n_plus = 0;
  Index n_minus = 0;
  Index n_zero = 0;
  bool indefinite() const { return n_plus > 0 && n_minus > 0; }
  bool semidefinite() const { return !indefinite(); }
};

Inertia inertia(const Matrix& b, const ToleranceProfile& tol);

enum class IntervalStatus { Empty, Point, Interval };

const char* to_string(IntervalStatus s);

/// The set of parameters rho for which A + rho B is positive semidefinite
/// (lambda_min >= -psd_tol).  Concavity of rho -> lambda_min(A + rho B)
/// makes this set an interval; endpoints are resolved to bisection_tol.
struct AdmissibleInterval {
  IntervalStatus status = IntervalStatus::Empty;
  double rho_minus = 0.0;
  double rho_plus = 0.0;

  bool contains(double rho, double slack = 0.0) const {
    if (status == IntervalStatus::Empty) return false;
    return rho >= rho_minus - slack && rho <= rho_plus + slack;
  }
  double width() const { return status == IntervalStatus::Empty ? 0.0 : rho_plus - rho_minus; }

  /// A nonzero parameter clear of both endpoints, if the interval offers one.
  /// margin is the required distance from 0 and from the endpoints as a
  /// fraction of the width.
  bool pick_nonzero(double margin, double* rho_out) const;
};

/// Requires B indefinite (otherwise the one-dimensional search cannot
/// bracket; throws ValidationError).  Expands a bracket around the concave
/// maximum of lambda_min, takes the maximum by ternary search, then bisects
/// outward for each endpoint.
AdmissibleInterval admissible_interval(const Matrix& a, const Matrix& b,
                                       const ToleranceProfile& tol);

/// Monte-Carlo estimate of the interval endpoints through the generalized
/// Rayleigh quotients
///   rho_minus = -inf { x^H A x / x^H B x : x^H B x > 0 },
///   rho_plus  = -sup { x^H A x / x^H B x : x^H B x < 0 }.
/// Deterministic for a fixed (a, b, sample_count, seed).
struct QuotientEstimate {
  double rho_minus_est = 0.0;
  double rho_plus_est = 0.0;
  std::size_t pos_samples = 0;  ///< draws with x^H B x > 0
  std::size_t neg_samples = 0;
};

QuotientEstimate quotient_oracle(const Matrix& a, const Matrix& b,
                                 std::size_t sample_count, std::uint64_t seed);

/// Draws vectors that are exactly neutral for B (x^H B x = 0 within
/// psd_tol * |x|^2) by pairing positive and negative eigendirections with
/// matched Rayleigh weights and adding free kernel components.  Near-equal
/// eigenvalues are mixed inside their group so the samples are not locked
/// to individual eigenvectors.  Throws ValidationError when B is
/// semidefinite (the neutral cone is just the kernel).
std::vector<Vector> neutral_cone_sample(const Matrix& b, std::size_t count,
                                        std::uint64_t seed, const ToleranceProfile& tol);

/// Empirical test of nonnegativity of x^H A x over the neutral cone of B.
/// This is the sampled counterpart of "the admissible interval is
/// nonempty"; the exact decision lives in admissible_interval.
struct ConePositivity {
  bool positive = true;
  double worst_value = 0.0;  ///< min of x^H A x / |x|^2 over the samples
  Vector worst_witness;
};

ConePositivity cone_positivity_test(const ProblemData& data, std::size_t count,
                                    std::uint64_t seed);

}  // namespace kspline
