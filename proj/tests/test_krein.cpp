#include <doctest.h>

#include "kspline/krein.hpp"

using namespace kspline;

namespace {
const ToleranceProfile tol{};

KreinSpace minkowski2() {
  Matrix g(2, 2);
  g << 1.0, 0.0, 0.0, -1.0;
  return KreinSpace(g, tol);
}

// Random Hermitian invertible gram: Q diag(s_i) Q^H with |s_i| in [0.5, 1.5].
KreinSpace random_space(Index n, Rng& rng, bool force_indefinite) {
  for (;;) {
    const Matrix raw = rng.gaussian_matrix(n, n);
    const Eigen::HouseholderQR<Matrix> qr(raw);
    const Matrix q = qr.householderQ() * Matrix::Identity(n, n);
    RealVector d(n);
    for (Index i = 0; i < n; ++i) {
      const double mag = 0.5 + rng.uniform();
      d(i) = (rng.uniform() < 0.5 ? -mag : mag);
    }
    if (force_indefinite) {
      d(0) = std::abs(d(0));
      d(n - 1) = -std::abs(d(n - 1));
    }
    const Matrix g = q * d.asDiagonal() * q.adjoint();
    KreinSpace space(g, tol);
    if (!force_indefinite || (space.n_plus() > 0 && space.n_minus() > 0)) return space;
  }
}
}  // namespace

TEST_CASE("inner product is linear in the first slot, conjugate in the second") {
  const KreinSpace space = minkowski2();
  Vector x(2), y(2);
  x << Complex(1.0, 0.0), Complex(0.0, 1.0);   // (1, i)
  y << Complex(0.0, 1.0), Complex(1.0, 0.0);   // (i, 1)
  // [x, y] = y^H G x = conj(i)*1 + (-1)*1*i = -2i
  const Complex v = space.inner(x, y);
  CHECK(std::abs(v - Complex(0.0, -2.0)) <= 1e-14);
  // swapping arguments conjugates
  CHECK(std::abs(space.inner(y, x) - std::conj(v)) <= 1e-14);
  // scaling the first argument scales linearly
  const Complex a(2.0, 3.0);
  CHECK(std::abs(space.inner(a * x, y) - a * v) <= 1e-13);
  // scaling the second argument scales by the conjugate
  CHECK(std::abs(space.inner(x, a * y) - std::conj(a) * v) <= 1e-13);
}

TEST_CASE("vector classes in the plane with signature (1,1)") {
  const KreinSpace space = minkowski2();
  CHECK(space.n_plus() == 1);
  CHECK(space.n_minus() == 1);
  Vector pos(2), neg(2), neu(2);
  pos << 2.0, 1.0;
  neg << 1.0, 2.0;
  neu << 1.0, 1.0;
  CHECK(classify_vector(space, pos, tol) == VectorClass::Positive);
  CHECK(classify_vector(space, neg, tol) == VectorClass::Negative);
  CHECK(classify_vector(space, neu, tol) == VectorClass::Neutral);
  CHECK_THROWS_AS(classify_vector(space, Vector::Zero(2), tol), ValidationError);
}

TEST_CASE("gram validation") {
  Matrix notherm(2, 2);
  notherm << 1.0, 1.0, 0.0, 1.0;
  CHECK_THROWS_AS(KreinSpace(notherm, tol), ValidationError);
  Matrix singular(2, 2);
  singular << 1.0, 0.0, 0.0, 0.0;
  CHECK_THROWS_AS(KreinSpace(singular, tol), ValidationError);
}

TEST_CASE("krein_adjoint satisfies the defining identity on random data") {
  Rng rng(101);
  for (int trial = 0; trial < 6; ++trial) {
    const Index nd = 2 + static_cast<Index>(rng.index(3));
    const Index nc = 2 + static_cast<Index>(rng.index(3));
    const KreinSpace dom = random_space(nd, rng, false);
    const KreinSpace cod = random_space(nc, rng, false);
    const Matrix t = rng.gaussian_matrix(nc, nd);
    const Matrix ts = krein_adjoint(t, dom, cod);
    for (int k = 0; k < 4; ++k) {
      const Vector x = rng.gaussian_vector(nd);
      const Vector y = rng.gaussian_vector(nc);
      const Complex lhs = cod.inner(t * x, y);
      const Complex rhs = dom.inner(x, ts * y);
      CHECK(std::abs(lhs - rhs) <= 1e-9 * (1.0 + std::abs(lhs)));
    }
    // involution: (t#)# = t
    const Matrix tss = krein_adjoint(ts, cod, dom);
    CHECK((tss - t).norm() <= 1e-9 * std::max(1.0, t.norm()));
  }
}

TEST_CASE("adjoint reduces to the conjugate transpose in Euclidean spaces") {
  Rng rng(5);
  const Matrix t = rng.gaussian_matrix(3, 4);
  const Matrix ts = krein_adjoint(t, KreinSpace::hilbert(4), KreinSpace::hilbert(3));
  CHECK((ts - t.adjoint()).norm() <= 1e-13);
}

TEST_CASE("orthogonal companion of a neutral line is itself") {
  const KreinSpace space = minkowski2();
  Matrix c(2, 1);
  c << 1.0, 1.0;
  const Subspace line = Subspace::from_columns(c, tol);
  const Subspace comp = orthogonal_companion(space, line, tol);
  CHECK(comp.dim() == 1);
  CHECK(subspace_equal(comp, line, tol));
  // hence the line is its own isotropic part: degenerate, not regular
  const Subspace iso = isotropic_part(space, line, tol);
  CHECK(iso.dim() == 1);
  const SubspaceClass cls = classify_subspace(space, line, tol);
  CHECK(cls.definiteness == Definiteness::Neutral);
  CHECK_FALSE(cls.nondegenerate);
  CHECK_FALSE(cls.regular);
  CHECK(cls.pseudo_regular);
}

TEST_CASE("companion dimension formula and double companion") {
  Rng rng(303);
  for (int trial = 0; trial < 8; ++trial) {
    const Index n = 3 + static_cast<Index>(rng.index(3));
    const KreinSpace space = random_space(n, rng, true);
    const Index k = 1 + static_cast<Index>(rng.index(static_cast<std::size_t>(n - 1)));
    const Subspace m = Subspace::from_columns(rng.gaussian_matrix(n, k), tol);
    const Subspace comp = orthogonal_companion(space, m, tol);
    CHECK(comp.dim() == n - m.dim());
    // companion of the companion recovers the subspace (finite dimension)
    CHECK(subspace_equal(orthogonal_companion(space, comp, tol), m, tol));
    // every pair (m, y) with y in the companion is orthogonal
    for (Index j = 0; j < comp.dim(); ++j) {
      for (Index i = 0; i < m.dim(); ++i) {
        CHECK(std::abs(space.inner(m.basis().col(i), comp.basis().col(j))) <= 1e-10);
      }
    }
  }
}

TEST_CASE("regular iff nondegenerate in finite dimension") {
  Rng rng(404);
  for (int trial = 0; trial < 12; ++trial) {
    const Index n = 2 + static_cast<Index>(rng.index(4));
    const KreinSpace space = random_space(n, rng, trial % 2 == 0);
    const Index k = 1 + static_cast<Index>(rng.index(static_cast<std::size_t>(n)));
    const Subspace m = Subspace::from_columns(rng.gaussian_matrix(n, k), tol);
    const SubspaceClass cls = classify_subspace(space, m, tol);
    CHECK(cls.regular == cls.nondegenerate);
  }
}

TEST_CASE("uniformly positive subspace detected in signature (2,1)") {
  Matrix g = Matrix::Zero(3, 3);
  g(0, 0) = 1.0;
  g(1, 1) = 1.0;
  g(2, 2) = -1.0;
  const KreinSpace space(g, tol);
  Matrix c(3, 2);
  c.setZero();
  c(0, 0) = 1.0;
  c(1, 1) = 1.0;
  const SubspaceClass cls = classify_subspace(space, Subspace::from_columns(c, tol), tol);
  CHECK(cls.definiteness == Definiteness::Positive);
  CHECK(cls.uniformly_positive);
  CHECK_FALSE(cls.uniformly_negative);
  CHECK(cls.nondegenerate);
  CHECK(cls.regular);

  // the whole space is indefinite but regular
  const SubspaceClass whole = classify_subspace(space, Subspace::full(3), tol);
  CHECK(whole.definiteness == Definiteness::Indefinite);
  CHECK(whole.regular);
}
