// Acceptance gate: eight end-to-end criteria, one PASS/FAIL line each.
// Usage: acceptance <path-to-cli-binary>
// Exit code 0 iff every criterion passes.

#include "kspline/verify.hpp"

#include "fixtures.hpp"

#include <sys/wait.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>

using namespace kspline;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

bool g_all_ok = true;

void report(int num, const char* label, bool ok, const std::string& detail) {
  std::printf("%s criterion %d: %s%s%s\n", ok ? "PASS" : "FAIL", num, label,
              detail.empty() ? "" : " -- ", detail.c_str());
  std::fflush(stdout);
  if (!ok) g_all_ok = false;
}

double fd_gradient_norm(const SmoothingProblem& p, const Vector& x) {
  const double eps = 1e-6;
  double sq = 0.0;
  for (Index i = 0; i < x.size(); ++i) {
    for (const Complex dir : {Complex(1.0, 0.0), Complex(0.0, 1.0)}) {
      Vector xp = x, xm = x;
      xp(i) += eps * dir;
      xm(i) -= eps * dir;
      const double d = (objective(p, xp) - objective(p, xm)) / (2.0 * eps);
      sq += d * d;
    }
  }
  return std::sqrt(sq);
}

// ---- criterion 1: interval endpoints and the sampled quotient bounds ----
void criterion1() {
  const auto t0 = Clock::now();
  const ProblemData d1 = fixtures::d1();
  const GramPair g = build_grams(d1);
  const AdmissibleInterval ival = admissible_interval(g.A, g.B, d1.tol);
  bool ok = ival.status == IntervalStatus::Interval &&
            std::abs(ival.rho_minus - (-1.0)) <= 1e-8 &&
            std::abs(ival.rho_plus - 4.0) <= 1e-8;
  std::ostringstream detail;
  detail << "interval [" << ival.rho_minus << ", " << ival.rho_plus << "]";
  if (ok) {
    const QuotientEstimate est = quotient_oracle(g.A, g.B, 100000, 2024);
    ok = std::abs(est.rho_minus_est - (-1.0)) <= 1e-3 &&
         std::abs(est.rho_plus_est - 4.0) <= 1e-3;
    detail << ", sampled [" << est.rho_minus_est << ", " << est.rho_plus_est << "]";
  }
  const double dt = seconds_since(t0);
  detail << ", " << dt << " s";
  if (dt >= 1.0) ok = false;
  report(1, "diagonal fixture interval and quotient oracle", ok, detail.str());
}

// ---- criterion 2: closed-form solution, minimality, vanishing gradient ----
void criterion2() {
  const ProblemData d1 = fixtures::d1();
  const SmoothingProblem p{d1, 1.0, fixtures::rvec2(1.0, 1.0)};
  const SmoothingSolution sol = solve_smoothing(p);
  bool ok = sol.existence.exists;
  std::ostringstream detail;
  if (ok) {
    const Vector& xt = sol.manifold.particular;
    const double f0 = objective(p, xt);
    ok = std::abs(xt(0) - Complex(0.5, 0.0)) <= 1e-10 &&
         std::abs(xt(1) - Complex(-1.0 / 3.0, 0.0)) <= 1e-10 &&
         std::abs(f0 - (-5.0 / 6.0)) <= 1e-10;
    detail << "x = (" << xt(0).real() << ", " << xt(1).real() << "), F = " << f0;

    Rng rng(8675309);
    double worst_gain = 0.0;
    for (int i = 0; i < 10000 && ok; ++i) {
      const Vector x = xt + (10.0 * rng.uniform()) * rng.unit_vector(2);
      worst_gain = std::max(worst_gain, f0 - objective(p, x));
      if (worst_gain > 1e-8) ok = false;
    }
    detail << ", best perturbation gain " << worst_gain;

    const double gnorm = fd_gradient_norm(p, xt);
    if (gnorm > 1e-6) ok = false;
    detail << ", |grad| = " << gnorm;
  } else {
    detail << sol.existence.message;
  }
  report(2, "closed-form regularized solution with optimality certificates", ok,
         detail.str());
}

// ---- criterion 3: degenerate-parameter manifold and the range clause ----
void criterion3() {
  const ProblemData d1 = fixtures::d1();
  const SmoothingProblem p{d1, 4.0, fixtures::rvec2(1.0, 0.0)};
  const SmoothingSolution sol = solve_smoothing(p);
  bool ok = sol.existence.exists;
  std::ostringstream detail;
  if (ok) {
    const Vector& xt = sol.manifold.particular;
    ok = std::abs(xt(0) - Complex(0.8, 0.0)) <= 1e-10 &&
         std::abs(xt(1)) <= 1e-10;
    Matrix e2 = Matrix::Zero(2, 1);
    e2(1, 0) = 1.0;
    const Subspace expected = Subspace::from_columns(e2, d1.tol);
    const double angle = max_principal_angle(sol.manifold.directions, expected);
    if (angle > 1e-8) ok = false;
    detail << "particular (" << xt(0).real() << ", " << xt(1).real()
           << "), direction angle " << angle;

    const double f0 = objective(p, xt);
    for (const double c : {1.0, -1.0, 0.37}) {
      Vector x = xt;
      x(1) += Complex(c, 0.0);
      if (std::abs(objective(p, x) - f0) > 1e-9) ok = false;
    }
  } else {
    detail << sol.existence.message;
  }
  const SmoothingProblem bad{d1, 4.0, fixtures::rvec2(0.0, 1.0)};
  const ExistenceReport ex = smoothing_exists(bad);
  if (ex.exists || ex.status != SmoothStatus::RhsNotInRange) {
    ok = false;
    detail << "; inadmissible data not flagged by the range clause";
  }
  report(3, "solution manifold at the degenerate endpoint", ok, detail.str());
}

// ---- criterion 4: normal equation across 200 generated instances ----
void criterion4() {
  const auto t0 = Clock::now();
  bool ok = true;
  double worst = 0.0;
  std::ostringstream detail;
  for (int i = 0; i < 200 && ok; ++i) {
    const Index dims = 2 + (i % 7);  // domain dimensions 2..8
    const InstanceFile f = gen_instance(dims, Regime::Indefinite, 10000 + i);
    const ToleranceProfile tol = f.resolve_tolerances();
    const ProblemData data = f.to_problem(tol);
    const SmoothingProblem p{data, *f.rho, *f.z0};
    const SmoothingSolution sol = solve_smoothing(p);
    if (!sol.existence.exists) {
      ok = false;
      detail << "instance " << i << " unsolvable: " << sol.existence.message;
      break;
    }
    const GramPair g = build_grams(data);
    const Matrix pencil = hermitize(g.A + p.rho * g.B);
    const Vector rhs = p.rho * (data.V.adjoint() * data.E.gram() * p.z0);
    const double rel = (pencil * sol.manifold.particular - rhs).norm() /
                       std::max(1.0, rhs.norm());
    worst = std::max(worst, rel);
    if (rel > 1e-9) {
      ok = false;
      detail << "instance " << i << " residual " << rel;
    }
  }
  const double dt = seconds_since(t0);
  if (dt >= 30.0) ok = false;
  if (ok) detail << "worst relative residual " << worst;
  detail << ", " << dt << " s";
  report(4, "normal equation on 200 generated instances", ok, detail.str());
}

// ---- criterion 5: bridge certificates both ways plus the worked case ----
void criterion5() {
  bool ok = true;
  std::ostringstream detail;
  for (int i = 0; i < 100 && ok; ++i) {
    const Index dims = 3 + (i % 6);
    const InstanceFile f = gen_instance(dims, Regime::Indefinite, 50000 + i);
    const ToleranceProfile tol = f.resolve_tolerances();
    const ProblemData data = f.to_problem(tol);
    const BridgeResult to_w = bridge_z0_to_w0(SmoothingProblem{data, *f.rho, *f.z0});
    if (!to_w.certificate_ok) {
      ok = false;
      detail << "z2w certificate failed on instance " << i << ": " << to_w.detail;
      break;
    }
    const BridgeResult to_z =
        bridge_w0_to_z0(InterpolationProblem{data, *f.w0}, *f.rho);
    if (!to_z.certificate_ok) {
      ok = false;
      detail << "w2z certificate failed on instance " << i << ": " << to_z.detail;
      break;
    }
  }
  if (ok) {
    const ProblemData d2 = fixtures::d2();
    const BridgeResult br =
        bridge_w0_to_z0(InterpolationProblem{d2, fixtures::rvec2(1.0, 1.0)}, 0.5);
    ok = std::abs(br.mapped(0) - Complex(3.0, 0.0)) <= 1e-10 &&
         std::abs(br.mapped(1) - Complex(-1.0, 0.0)) <= 1e-10;
    detail << "worked case z0 = (" << br.mapped(0).real() << ", "
           << br.mapped(1).real() << ")";
  }
  report(5, "bridge certificates on 100 instances and the worked case", ok,
         detail.str());
}

// ---- criterion 6: manifolds agree exactly in the equality case ----
void criterion6() {
  bool ok = true;
  int equality_hits = 0;
  std::ostringstream detail;
  for (int i = 0; i < 100 && ok; ++i) {
    const Index dims = 3 + (i % 6);
    const InstanceFile f = gen_instance(dims, Regime::Indefinite, 60000 + i);
    const ToleranceProfile tol = f.resolve_tolerances();
    const ProblemData data = f.to_problem(tol);
    if (!equality_case(data, *f.rho)) continue;
    ++equality_hits;
    const BridgeResult br = bridge_z0_to_w0(SmoothingProblem{data, *f.rho, *f.z0});
    const double angle = max_principal_angle(br.sp.directions, br.sm.directions);
    if (angle > 1e-8) {
      ok = false;
      detail << "instance " << i << " direction angle " << angle;
      break;
    }
    if (!br.sm.directions.contains(Vector(br.sp.particular - br.sm.particular), tol)) {
      ok = false;
      detail << "instance " << i << " particular points differ across manifolds";
      break;
    }
  }
  if (equality_hits == 0) {
    ok = false;
    detail << "no equality-case instance encountered";
  }
  if (ok) {
    // Degenerate endpoint of the diagonal fixture: inclusion must be strict.
    const ProblemData d1 = fixtures::d1();
    const BridgeResult br =
        bridge_z0_to_w0(SmoothingProblem{d1, 4.0, fixtures::rvec2(1.0, 0.0)});
    if (!br.inclusion_strict || !br.certificate_ok) {
      ok = false;
      detail << "strict inclusion not detected at the degenerate endpoint";
    } else {
      detail << equality_hits << " equality cases, all manifolds agree; "
             << "strictness detected on the degenerate fixture";
    }
  }
  report(6, "equality case: constrained and regularized manifolds coincide", ok,
         detail.str());
}

// ---- criterion 7: structural identity suite on 100 instances ----
void criterion7() {
  const auto t0 = Clock::now();
  bool ok = true;
  std::ostringstream detail;
  for (int i = 0; i < 100 && ok; ++i) {
    const Index dims = 3 + (i % 6);
    const InstanceFile f = gen_instance(dims, Regime::Indefinite, 70000 + i);
    const ToleranceProfile tol = f.resolve_tolerances();
    const ProblemData data = f.to_problem(tol);

    const TNVReport tnv = analyze_TNV(data);
    if (!tnv.decomposition_verified) {
      ok = false;
      detail << "constrained decomposition failed on instance " << i << ": "
             << tnv.detail;
      break;
    }

    const StructureReport sr = verify_structure(data, *f.rho, 8, 70000 + i);
    if (!sr.all_pass()) {
      ok = false;
      for (const auto& c : sr.checks)
        if (!c.pass) {
          detail << "structure check '" << c.name << "' failed on instance " << i
                 << ": " << c.detail;
          break;
        }
      break;
    }

    // Uniform positivity <=> regular + nonnegative, on a random subspace of
    // each target space.
    Rng rng(90000 + i);
    for (const KreinSpace* sp : {&data.K, &data.E}) {
      const Index n = sp->dim();
      const Index d = 1 + static_cast<Index>(rng.index(static_cast<std::size_t>(n)));
      const Subspace m = Subspace::from_columns(rng.gaussian_matrix(n, d), tol);
      const SubspaceClass cls = classify_subspace(*sp, m, tol);
      const bool nonneg = cls.definiteness == Definiteness::Positive ||
                          cls.definiteness == Definiteness::Nonnegative;
      if (cls.uniformly_positive != (cls.regular && nonneg)) {
        ok = false;
        detail << "uniform-positivity characterization failed on instance " << i;
        break;
      }
    }
  }
  const double dt = seconds_since(t0);
  if (dt >= 60.0) ok = false;
  if (ok) detail << "100 instances, zero failures";
  detail << ", " << dt << " s";
  report(7, "structure-theorem suite on 100 instances", ok, detail.str());
}

// ---- criterion 8: CLI determinism and instance round-trip ----
std::string run_command(const std::string& cmd, int* exit_code) {
  std::string out;
  FILE* pipe = popen(cmd.c_str(), "r");
  if (pipe == nullptr) {
    *exit_code = -1;
    return out;
  }
  char buf[4096];
  std::size_t n = 0;
  while ((n = fread(buf, 1, sizeof buf, pipe)) > 0) out.append(buf, n);
  const int status = pclose(pipe);
  *exit_code = (status >= 0 && WIFEXITED(status)) ? WEXITSTATUS(status) : -1;
  return out;
}

void criterion8(const std::string& cli) {
  bool ok = true;
  std::ostringstream detail;
  const std::string quoted = "'" + cli + "'";

  const std::string cmd = quoted + " verify --random 20 --dims 6 --seed 7 2>/dev/null";
  int code1 = 0, code2 = 0;
  const std::string out1 = run_command(cmd, &code1);
  const std::string out2 = run_command(cmd, &code2);
  if (code1 != 0 || code2 != 0) {
    ok = false;
    detail << "verify exited with " << code1 << " / " << code2;
  } else if (out1 != out2) {
    ok = false;
    detail << "verify reports differ between runs";
  } else if (out1.find("\"all_pass\": true") == std::string::npos) {
    ok = false;
    detail << "verify report does not claim success";
  } else {
    detail << "two verify runs byte-identical (" << out1.size() << " bytes)";
  }

  if (ok) {
    const std::string gen_path = "acceptance_roundtrip.json";
    int gcode = 0;
    run_command(quoted + " gen --dims 4 --seed 3 --out " + gen_path, &gcode);
    std::ifstream in(gen_path, std::ios::binary);
    std::ostringstream buf;
    buf << in.rdbuf();
    const std::string text = buf.str();
    if (gcode != 0 || text.empty()) {
      ok = false;
      detail << "; gen failed";
    } else {
      const InstanceFile f = InstanceFile::parse(text);
      if (f.render() != text) {
        ok = false;
        detail << "; round-trip not byte-exact";
      } else {
        detail << "; instance round-trip exact";
      }
    }
    std::remove(gen_path.c_str());
  }
  report(8, "deterministic reports and exact instance round-trip", ok, detail.str());
}

}  // namespace

int main(int argc, char** argv) {
  if (argc < 2) {
    std::fprintf(stderr, "usage: acceptance <path-to-cli>\n");
    return 2;
  }
  try {
    criterion1();
    criterion2();
    criterion3();
    criterion4();
    criterion5();
    criterion6();
    criterion7();
    criterion8(argv[1]);
  } catch (const std::exception& e) {
    std::printf("FAIL criterion ?: unhandled exception -- %s\n", e.what());
    g_all_ok = false;
  }
  return g_all_ok ? 0 : 1;
}
