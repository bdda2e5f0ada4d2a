#include "kspline/instance.hpp"
#include "kspline/smoothing.hpp"
#include "kspline/interpolation.hpp"

#include <doctest.h>

#include "fixtures.hpp"

using namespace kspline;

namespace {

// D1 with rho = 1 and z0 = (6, 2), written out the way the tool stores it.
// Pins the on-disk schema: any incompatible change to field names or the
// [re, im] encoding breaks this string.
const char* kD1Json = R"({
  "field": "complex",
  "H_dim": 2,
  "K": {"dim": 2, "gram": [[[1,0],[0,0]],[[0,0],[1,0]]]},
  "E": {"dim": 2, "gram": [[[1,0],[0,0]],[[0,0],[-1,0]]]},
  "T": [[[1,0],[0,0]],[[0,0],[2,0]]],
  "V": [[[1,0],[0,0]],[[0,0],[1,0]]],
  "rho": 1.0,
  "z0": [[6,0],[2,0]]
})";

}  // namespace

TEST_CASE("hand-written instance parses and solves to the closed form") {
  const InstanceFile f = InstanceFile::parse(kD1Json);
  CHECK(f.h_dim() == 2);
  CHECK(f.rho.has_value());
  CHECK(*f.rho == doctest::Approx(1.0));
  CHECK(f.z0.has_value());
  CHECK(!f.w0.has_value());
  CHECK(!f.tolerances.has_value());

  const ToleranceProfile tol = f.resolve_tolerances();
  const ProblemData data = f.to_problem(tol);
  const SmoothingProblem p{data, *f.rho, *f.z0};
  const SmoothingSolution sol = solve_smoothing(p);
  REQUIRE(sol.existence.exists);
  // Pencil diag(2, 3), right-hand side (6, -2): solution (3, -2/3).
  CHECK(std::abs(sol.manifold.particular(0) - Complex(3.0, 0.0)) < 1e-10);
  CHECK(std::abs(sol.manifold.particular(1) - Complex(-2.0 / 3.0, 0.0)) < 1e-10);
}

TEST_CASE("render / parse round-trip is exact") {
  const InstanceFile f = gen_instance(5, Regime::Indefinite, 42);
  const std::string text = f.render();
  const InstanceFile g = InstanceFile::parse(text);
  CHECK(g.render() == text);  // byte-identical second rendering
  CHECK((g.T - f.T).cwiseAbs().maxCoeff() == 0.0);
  CHECK((g.V - f.V).cwiseAbs().maxCoeff() == 0.0);
  CHECK((g.k_gram - f.k_gram).cwiseAbs().maxCoeff() == 0.0);
  CHECK((g.e_gram - f.e_gram).cwiseAbs().maxCoeff() == 0.0);
  REQUIRE(g.rho.has_value());
  CHECK(*g.rho == *f.rho);  // bit-exact double round-trip
  REQUIRE(g.z0.has_value());
  CHECK((*g.z0 - *f.z0).cwiseAbs().maxCoeff() == 0.0);
  REQUIRE(g.seed.has_value());
  CHECK(*g.seed == 42);
  CHECK(g.digest() == f.digest());
}

TEST_CASE("generation is deterministic in the seed") {
  const InstanceFile a = gen_instance(4, Regime::Indefinite, 7);
  const InstanceFile b = gen_instance(4, Regime::Indefinite, 7);
  CHECK(a.render() == b.render());
  const InstanceFile c = gen_instance(4, Regime::Indefinite, 8);
  CHECK(c.digest() != a.digest());
  CHECK(a.digest().size() == 16);
}

TEST_CASE("indefinite regime delivers a solvable, admissible instance") {
  for (const std::uint64_t seed : {1ull, 2ull, 3ull, 4ull}) {
    const InstanceFile f = gen_instance(5, Regime::Indefinite, seed);
    const ToleranceProfile tol = f.resolve_tolerances();
    const ProblemData data = f.to_problem(tol);
    const GramPair g = build_grams(data);
    CHECK(inertia(g.B, tol).indefinite());

    REQUIRE(f.rho.has_value());
    CHECK(*f.rho != 0.0);
    const AdmissibleInterval ival = admissible_interval(g.A, g.B, tol);
    CHECK(ival.status != IntervalStatus::Empty);
    CHECK(ival.contains(*f.rho, tol.bisection_tol));

    REQUIRE(f.z0.has_value());
    const SmoothingProblem p{data, *f.rho, *f.z0};
    CHECK(smoothing_exists(p).exists);

    REQUIRE(f.w0.has_value());
    const InterpolationProblem ip{data, *f.w0};
    CHECK(interp_exists(ip).exists);

    // The whole point of the regime: the penalty form is nonnegative over
    // the neutral directions of the constraint form.
    CHECK(cone_positivity_test(data, 50, seed).positive);
  }
}

TEST_CASE("semidefinite regime has a one-signed constraint form and no parameter") {
  const InstanceFile f = gen_instance(5, Regime::Semidefinite, 21);
  const ToleranceProfile tol = f.resolve_tolerances();
  const ProblemData data = f.to_problem(tol);
  const Inertia bi = inertia(build_grams(data).B, tol);
  CHECK(!bi.indefinite());
  CHECK(!f.rho.has_value());
  CHECK(f.w0.has_value());
}

TEST_CASE("empty-interval regime really has no admissible parameter") {
  const InstanceFile f = gen_instance(5, Regime::EmptyInterval, 31);
  const ToleranceProfile tol = f.resolve_tolerances();
  const ProblemData data = f.to_problem(tol);
  const GramPair g = build_grams(data);
  REQUIRE(inertia(g.B, tol).indefinite());
  CHECK(admissible_interval(g.A, g.B, tol).status == IntervalStatus::Empty);
  CHECK(!f.rho.has_value());
}

TEST_CASE("parse reports the offending field path") {
  CHECK_THROWS_AS(InstanceFile::parse("not json"), ValidationError);
  CHECK_THROWS_WITH_AS(InstanceFile::parse(R"({"field":"complex"})"),
                       doctest::Contains("H_dim"), ValidationError);
  // Wrong row count in T.
  CHECK_THROWS_WITH_AS(
      InstanceFile::parse(R"({
        "field": "complex", "H_dim": 2,
        "K": {"dim": 2, "gram": [[[1,0],[0,0]],[[0,0],[1,0]]]},
        "E": {"dim": 2, "gram": [[[1,0],[0,0]],[[0,0],[1,0]]]},
        "T": [[[1,0],[0,0]]],
        "V": [[[1,0],[0,0]],[[0,0],[1,0]]]
      })"),
      doctest::Contains("'T'"), ValidationError);
  // Malformed complex entry.
  CHECK_THROWS_WITH_AS(
      InstanceFile::parse(R"({
        "field": "complex", "H_dim": 1,
        "K": {"dim": 1, "gram": [[[1,0,0]]]},
        "E": {"dim": 1, "gram": [[[1,0]]]},
        "T": [[[1,0]]],
        "V": [[[1,0]]]
      })"),
      doctest::Contains("[re, im]"), ValidationError);
  // Real-field marker is not supported.
  CHECK_THROWS_WITH_AS(
      InstanceFile::parse(R"({"field":"real","H_dim":1})"),
      doctest::Contains("complex"), ValidationError);
}

TEST_CASE("to_problem enforces the numeric invariants") {
  // Singular gram.
  const char* singular = R"({
    "field": "complex", "H_dim": 2,
    "K": {"dim": 2, "gram": [[[1,0],[0,0]],[[0,0],[0,0]]]},
    "E": {"dim": 2, "gram": [[[1,0],[0,0]],[[0,0],[-1,0]]]},
    "T": [[[1,0],[0,0]],[[0,0],[1,0]]],
    "V": [[[1,0],[0,0]],[[0,0],[1,0]]]
  })";
  const InstanceFile f = InstanceFile::parse(singular);
  CHECK_THROWS_AS(f.to_problem(ToleranceProfile{}), ValidationError);

  // Rank-deficient constraint map (rows are equal): not surjective.
  const char* deficient = R"({
    "field": "complex", "H_dim": 2,
    "K": {"dim": 2, "gram": [[[1,0],[0,0]],[[0,0],[1,0]]]},
    "E": {"dim": 2, "gram": [[[1,0],[0,0]],[[0,0],[-1,0]]]},
    "T": [[[1,0],[0,0]],[[0,0],[1,0]]],
    "V": [[[1,0],[1,0]],[[1,0],[1,0]]]
  })";
  CHECK_THROWS_AS(InstanceFile::parse(deficient).to_problem(ToleranceProfile{}),
                  ValidationError);
}

TEST_CASE("stored tolerances survive the round trip and are applied") {
  InstanceFile f = gen_instance(4, Regime::Indefinite, 55);
  ToleranceProfile custom;
  custom.psd_tol = 1e-7;
  custom.rank_rtol = 1e-9;
  f.tolerances = custom;
  const InstanceFile g = InstanceFile::parse(f.render());
  REQUIRE(g.tolerances.has_value());
  CHECK(g.tolerances->psd_tol == 1e-7);
  CHECK(g.tolerances->rank_rtol == 1e-9);
  CHECK(g.resolve_tolerances().psd_tol == 1e-7);
  CHECK(g.digest() == f.digest());
}

TEST_CASE("gen rejects a domain too small to carry both maps") {
  CHECK_THROWS_AS(gen_instance(1, Regime::Indefinite, 1), ValidationError);
}
