#pragma once

#include "kspline/pencil.hpp"

#include <initializer_list>

// Shared analytic fixtures.  Values for these three instances are known in
// closed form and frozen into the expectations of several suites.
namespace kspline::fixtures {

inline KreinSpace diag_space(std::initializer_list<double> diag) {
  const Index n = static_cast<Index>(diag.size());
  Matrix g = Matrix::Zero(n, n);
  Index i = 0;
  for (const double v : diag) g(i, i) = v, ++i;
  return KreinSpace(g, ToleranceProfile{});
}

// Diagonal penalty T = diag(1,2) into a Euclidean plane, identity
// constraint into the signature-(1,1) plane.  Pencil diag(1 + r, 4 - r),
// admissible interval [-1, 4].
inline ProblemData d1() {
  Matrix t = Matrix::Zero(2, 2);
  t(0, 0) = 1.0;
  t(1, 1) = 2.0;
  return ProblemData{KreinSpace::hilbert(2), diag_space({1.0, -1.0}), t,
                     Matrix::Identity(2, 2), ToleranceProfile{}};
}

// Identity penalty on C^3, constraint V = rows(e1, e2) into the
// signature-(1,1) plane.  Pencil diag(1 + r, 1 - r, 1), interval [-1, 1].
inline ProblemData d2() {
  Matrix v = Matrix::Zero(2, 3);
  v(0, 0) = 1.0;
  v(1, 1) = 1.0;
  return ProblemData{KreinSpace::hilbert(3), diag_space({1.0, -1.0}),
                     Matrix::Identity(3, 3), v, ToleranceProfile{}};
}

// Identity penalty into signature-(2,1) space, constraint
// V = rows(e1, e2 - e3) into a Euclidean plane.  N(V) = span{e2 + e3} is
// where the penalty form degenerates.
inline ProblemData d3() {
  Matrix v = Matrix::Zero(2, 3);
  v(0, 0) = 1.0;
  v(1, 1) = 1.0;
  v(1, 2) = -1.0;
  return ProblemData{diag_space({1.0, 1.0, -1.0}), KreinSpace::hilbert(2),
                     Matrix::Identity(3, 3), v, ToleranceProfile{}};
}

inline Vector rvec2(double a, double b) {
  Vector v(2);
  v << Complex(a, 0.0), Complex(b, 0.0);
  return v;
}

inline Vector rvec3(double a, double b, double c) {
  Vector v(3);
  v << Complex(a, 0.0), Complex(b, 0.0), Complex(c, 0.0);
  return v;
}

}  // namespace kspline::fixtures
