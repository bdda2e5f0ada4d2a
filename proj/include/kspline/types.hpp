#pragma once

#include <Eigen/Dense>

#include <complex>
#include <cstdint>
#include <numbers>
#include <random>
#include <stdexcept>
#include <string>

namespace kspline {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;
using Index = Eigen::Index;

/// Raised when inputs violate a documented precondition: bad dimensions,
/// non-Hermitian gram, non-surjective operator, malformed instance file.
/// Maps to process exit code 1 in the command-line tool.
class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Raised when a numerical routine cannot deliver its contract
/// (factorization failure, runaway bracket search).  Exit code 2.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The four knobs that govern every tolerance decision in the library.
/// All comparisons elsewhere reference one of these; nothing else is tunable.
struct ToleranceProfile {
  double rank_rtol = 1e-10;      ///< singular values below rank_rtol * sigma_max are zero
  double psd_tol = 1e-9;         ///< absolute eigenvalue slack for nonnegativity / inertia bands
  double residual_tol = 1e-9;    ///< residual bound per unit of right-hand-side norm
  double bisection_tol = 1e-10;  ///< resolution of interval endpoints in the pencil parameter

  void validate() const {
    if (!(rank_rtol > 0.0) || !(psd_tol > 0.0) || !(residual_tol > 0.0) ||
        !(bisection_tol > 0.0)) {
      throw ValidationError("tolerances: all four entries must be strictly positive");
    }
  }
};

/// Deterministic random source.  Uses mt19937_64 plus a hand-rolled
/// Box-Muller transform so that the stream of variates depends only on the
/// seed and the call sequence, never on the standard library's unspecified
/// distribution internals.  Identical seeds give identical streams on every
/// platform we build for.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  /// Uniform double in [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

  /// Standard real normal variate.
  double normal() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u1 = 0.0;
    do {
      u1 = uniform();
    } while (u1 <= 0.0);
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 2.0 * std::numbers::pi * u2;
    spare_ = r * std::sin(a);
    have_spare_ = true;
    return r * std::cos(a);
  }

  /// Standard complex normal: E|z|^2 = 1.
  Complex cnormal() {
    const double re = normal();
    const double im = normal();
    return Complex(re * std::numbers::sqrt2 / 2.0, im * std::numbers::sqrt2 / 2.0);
  }

  /// Uniform index in [0, n).  n must be positive.
  std::size_t index(std::size_t n) {
    if (n == 0) throw ValidationError("Rng::index: empty range");
    return static_cast<std::size_t>(gen_() % n);
  }

  Vector gaussian_vector(Index n) {
    Vector v(n);
    for (Index i = 0; i < n; ++i) v(i) = cnormal();
    return v;
  }

  Matrix gaussian_matrix(Index rows, Index cols) {
    Matrix m(rows, cols);
    for (Index j = 0; j < cols; ++j)
      for (Index i = 0; i < rows; ++i) m(i, j) = cnormal();
    return m;
  }

  /// Unit vector drawn from the rotation-invariant distribution on the sphere.
  Vector unit_vector(Index n) {
    for (int attempt = 0; attempt < 64; ++attempt) {
      Vector v = gaussian_vector(n);
      const double norm = v.norm();
      if (norm > 1e-12) return v / norm;
    }
    throw NumericalError("Rng::unit_vector: degenerate draws");
  }

 private:
  std::mt19937_64 gen_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace kspline
