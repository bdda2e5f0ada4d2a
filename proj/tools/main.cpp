// Command-line front end: admissible-interval analysis, regularized and
// constrained solves, the two bridges, instance generation and the
// structural verification suite.  All reports are deterministic for fixed
// inputs; exit code 0 covers well-defined negative answers (empty interval,
// no solution), 1 is reserved for invalid inputs and 2 for numerical
// breakdowns.

#include "kspline/verify.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iostream>
#include <optional>

namespace {

using kspline::Index;
using kspline::Matrix;
using kspline::Vector;
using json = nlohmann::json;  // std::map keys => deterministic alphabetical order

json complex_json(kspline::Complex z) { return json::array({z.real(), z.imag()}); }

json vector_json(const Vector& v) {
  json out = json::array();
  for (Index i = 0; i < v.size(); ++i) out.push_back(complex_json(v(i)));
  return out;
}

json matrix_json(const Matrix& m) {
  json out = json::array();
  if (m.cols() == 0) return out;  // a width-zero matrix is just "no columns"
  for (Index r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (Index c = 0; c < m.cols(); ++c) row.push_back(complex_json(m(r, c)));
    out.push_back(std::move(row));
  }
  return out;
}

json tolerances_json(const kspline::ToleranceProfile& tol) {
  return {{"bisection_tol", tol.bisection_tol},
          {"psd_tol", tol.psd_tol},
          {"rank_rtol", tol.rank_rtol},
          {"residual_tol", tol.residual_tol}};
}

void render_text(const json& j, std::ostream& os, int indent) {
  const std::string pad(static_cast<std::size_t>(indent) * 2, ' ');
  for (auto it = j.begin(); it != j.end(); ++it) {
    if (it->is_object()) {
      os << pad << it.key() << ":\n";
      render_text(*it, os, indent + 1);
    } else {
      os << pad << it.key() << ": " << it->dump() << "\n";
    }
  }
}

void emit(const json& rep, const std::string& format, const std::string& out_path) {
  std::string text;
  if (format == "json") {
    text = rep.dump(2) + "\n";
  } else {
    std::ostringstream os;
    render_text(rep, os, 0);
    text = os.str();
  }
  if (out_path.empty()) {
    std::cout << text;
  } else {
    std::ofstream out(out_path, std::ios::binary);
    if (!out) throw kspline::ValidationError("cannot write output file '" + out_path + "'");
    out << text;
  }
}

struct CommonArgs {
  std::string file;
  std::string out;
  std::string format = "json";
  std::optional<double> tol_rank, tol_psd, tol_res;
  std::optional<double> rho_override;
};

kspline::ToleranceProfile resolve_tol(const kspline::InstanceFile& inst,
                                      const CommonArgs& args) {
  kspline::ToleranceProfile tol = inst.resolve_tolerances();
  if (args.tol_rank) tol.rank_rtol = *args.tol_rank;
  if (args.tol_psd) tol.psd_tol = *args.tol_psd;
  if (args.tol_res) tol.residual_tol = *args.tol_res;
  tol.validate();
  return tol;
}

double require_rho(const kspline::InstanceFile& inst, const CommonArgs& args) {
  if (args.rho_override) return *args.rho_override;
  if (inst.rho) return *inst.rho;
  throw kspline::ValidationError(
      "no parameter value: the instance has no \"rho\" and --rho was not given");
}

json report_head(const char* command, const kspline::InstanceFile& inst,
                 const kspline::ToleranceProfile& tol) {
  return {{"command", command},
          {"instance_digest", inst.digest()},
          {"tolerances", tolerances_json(tol)}};
}

int cmd_interval(const CommonArgs& args) {
  const auto inst = kspline::InstanceFile::load(args.file);
  const auto tol = resolve_tol(inst, args);
  const auto data = inst.to_problem(tol);
  json rep = report_head("interval", inst, tol);

  const kspline::GramPair g = kspline::build_grams(data);
  const kspline::Inertia bi = kspline::inertia(g.B, tol);
  rep["constraint_form_inertia"] = {
      {"minus", bi.n_minus}, {"plus", bi.n_plus}, {"zero", bi.n_zero}};

  if (!bi.indefinite()) {
    // One-signed constraint form: the one-parameter search degenerates; the
    // natural questions are the constrained (interpolation) ones.
    rep["status"] = "SEMIDEFINITE_CONSTRAINT_FORM";
    rep["note"] =
        "the constraint form is one-signed, so no bounded parameter interval "
        "exists; use the constrained interpolation commands for this instance";
    emit(rep, args.format, args.out);
    return 0;
  }

  const auto ival = kspline::admissible_interval(g.A, g.B, tol);
  rep["status"] = kspline::to_string(ival.status);
  if (ival.status != kspline::IntervalStatus::Empty) {
    rep["rho_minus"] = ival.rho_minus;
    rep["rho_plus"] = ival.rho_plus;
    rep["width"] = ival.width();
    rep["contains_zero"] = ival.contains(0.0);
  }
  emit(rep, args.format, args.out);
  return 0;
}

int cmd_smooth(const CommonArgs& args) {
  const auto inst = kspline::InstanceFile::load(args.file);
  const auto tol = resolve_tol(inst, args);
  const auto data = inst.to_problem(tol);
  if (!inst.z0)
    throw kspline::ValidationError("smooth: the instance carries no data vector \"z0\"");
  const double rho = require_rho(inst, args);

  const kspline::SmoothingProblem p{data, rho, *inst.z0};
  const kspline::SmoothingSolution sol = kspline::solve_smoothing(p);

  json rep = report_head("smooth", inst, tol);
  rep["rho"] = rho;
  rep["existence"] = {{"exists", sol.existence.exists},
                      {"pencil_lambda_min", sol.existence.pencil_lambda_min},
                      {"range_distance", sol.existence.range_distance},
                      {"reason", kspline::to_string(sol.existence.status)}};
  if (sol.existence.exists) {
    rep["status"] = "OK";
    rep["solution"] = {
        {"particular", vector_json(sol.manifold.particular)},
        {"objective", kspline::objective(p, sol.manifold.particular)},
        {"directions_dim", sol.manifold.directions.dim()},
        {"directions", matrix_json(sol.manifold.directions.basis())},
        {"residual_orthogonal",
         kspline::residual_orthogonality(p, sol.manifold.particular)}};
    rep["solvability"] = kspline::to_string(kspline::global_solvability(data, rho));
  } else {
    rep["status"] = "NO_SOLUTION";
  }
  emit(rep, args.format, args.out);
  return 0;
}

int cmd_interp(const CommonArgs& args) {
  const auto inst = kspline::InstanceFile::load(args.file);
  const auto tol = resolve_tol(inst, args);
  const auto data = inst.to_problem(tol);
  if (!inst.w0)
    throw kspline::ValidationError(
        "interp: the instance carries no constraint value \"w0\"");

  const kspline::InterpolationProblem p{data, *inst.w0};
  const kspline::InterpolationSolution sol = kspline::solve_interpolation(p);
  const kspline::TNVReport tnv = kspline::analyze_TNV(data);

  json rep = report_head("interp", inst, tol);
  rep["existence"] = {{"exists", sol.existence.exists},
                      {"tnv_lambda_min", sol.existence.tnv_lambda_min},
                      {"range_distance", sol.existence.range_distance},
                      {"reason", kspline::to_string(sol.existence.status)}};
  rep["constrained_form"] = {{"nondegenerate", tnv.nondegenerate},
                             {"regular", tnv.regular},
                             {"uniformly_positive", tnv.uniformly_positive},
                             {"decomposition_verified", tnv.decomposition_verified}};
  if (sol.existence.exists) {
    const double objective = data.K.self_inner(data.T * sol.manifold.particular);
    rep["status"] = "OK";
    rep["solution"] = {{"particular", vector_json(sol.manifold.particular)},
                       {"objective", objective},
                       {"directions_dim", sol.manifold.directions.dim()},
                       {"directions", matrix_json(sol.manifold.directions.basis())}};
  } else if (sol.existence.status == kspline::InterpStatus::HypothesisViolated) {
    rep["status"] = "HYPOTHESIS_VIOLATED";
  } else {
    rep["status"] = "NO_SOLUTION";
  }
  emit(rep, args.format, args.out);
  return 0;
}

int cmd_bridge(const CommonArgs& args, const std::string& direction) {
  const auto inst = kspline::InstanceFile::load(args.file);
  const auto tol = resolve_tol(inst, args);
  const auto data = inst.to_problem(tol);
  const double rho = require_rho(inst, args);

  json rep = report_head("bridge", inst, tol);
  rep["direction"] = direction;
  rep["rho"] = rho;

  kspline::BridgeResult br;
  if (direction == "z2w") {
    if (!inst.z0)
      throw kspline::ValidationError("bridge z2w: the instance carries no \"z0\"");
    br = kspline::bridge_z0_to_w0(kspline::SmoothingProblem{data, rho, *inst.z0});
    rep["w0"] = vector_json(br.mapped);
  } else if (direction == "w2z") {
    if (!inst.w0)
      throw kspline::ValidationError("bridge w2z: the instance carries no \"w0\"");
    br = kspline::bridge_w0_to_z0(kspline::InterpolationProblem{data, *inst.w0}, rho);
    rep["z0"] = vector_json(br.mapped);
  } else {
    throw kspline::ValidationError("bridge: --direction must be z2w or w2z");
  }

  rep["status"] = br.certificate_ok ? "OK" : "CERTIFICATE_FAILED";
  rep["certificate_ok"] = br.certificate_ok;
  rep["inclusion_strict"] = br.inclusion_strict;
  rep["equality_case"] = kspline::equality_case(data, rho);
  rep["constrained_directions_dim"] = br.sp.directions.dim();
  rep["regularized_directions_dim"] = br.sm.directions.dim();
  if (!br.detail.empty()) rep["detail"] = br.detail;
  emit(rep, args.format, args.out);
  return 0;
}

json summary_json(const kspline::VerifySummary& sum) {
  json checks;
  for (const auto& c : sum.checks) {
    json entry = {{"pass", c.pass}, {"fail", c.fail}, {"skipped", c.skipped}};
    if (!c.first_failure.empty()) entry["first_failure"] = c.first_failure;
    checks[c.name] = std::move(entry);
  }
  return {{"all_pass", sum.all_pass()},
          {"checks", std::move(checks)},
          {"instances", sum.instances}};
}

int cmd_verify(const CommonArgs& args, unsigned random_count, Index dims,
               std::uint64_t seed) {
  kspline::VerifySummary sum;
  json rep;
  if (!args.file.empty() && random_count > 0)
    throw kspline::ValidationError("verify: give an instance file or --random, not both");
  if (args.file.empty() && random_count == 0)
    throw kspline::ValidationError("verify: need an instance file or --random N");

  kspline::ToleranceProfile tol;
  if (!args.file.empty()) {
    const auto inst = kspline::InstanceFile::load(args.file);
    tol = inst.resolve_tolerances();
    if (args.tol_rank) tol.rank_rtol = *args.tol_rank;
    if (args.tol_psd) tol.psd_tol = *args.tol_psd;
    if (args.tol_res) tol.residual_tol = *args.tol_res;
    tol.validate();
    kspline::verify_instance(inst, tol, seed, sum);
    rep = report_head("verify", inst, tol);
  } else {
    rep["command"] = "verify";
    rep["tolerances"] = tolerances_json(tol);
    rep["dims"] = dims;
    rep["seed"] = seed;
    sum = kspline::verify_random(random_count, dims, seed);
  }
  rep["summary"] = summary_json(sum);
  rep["status"] = sum.all_pass() ? "OK" : "CHECK_FAILED";
  emit(rep, args.format, args.out);
  return sum.all_pass() ? 0 : 1;
}

int cmd_gen(const std::string& regime_name, Index dims, std::uint64_t seed,
            const std::string& out_path) {
  const kspline::Regime regime = kspline::parse_regime(regime_name);
  const kspline::InstanceFile inst = kspline::gen_instance(dims, regime, seed);
  if (out_path.empty()) {
    std::cout << inst.render();
  } else {
    inst.save(out_path);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "kspline: indefinite regularized smoothing and constrained "
      "interpolation in finite dimension"};
  app.require_subcommand(1);

  CommonArgs args;
  std::string direction;
  std::string regime = "INDEFINITE";
  unsigned random_count = 0;
  Index dims = 6;
  std::uint64_t seed = 0;

  const auto add_common = [&](CLI::App* sub, bool with_file) {
    if (with_file)
      sub->add_option("file", args.file, "instance file (JSON)")->required();
    sub->add_option("--out", args.out, "write the report to this path instead of stdout");
    sub->add_option("--format", args.format, "report format: json or text")
        ->check(CLI::IsMember({"json", "text"}));
    sub->add_option("--tol-rank", args.tol_rank, "override the relative rank cutoff");
    sub->add_option("--tol-psd", args.tol_psd, "override the semidefiniteness band");
    sub->add_option("--tol-res", args.tol_res, "override the residual bound");
  };

  auto* s_interval = app.add_subcommand("interval", "admissible parameter interval");
  add_common(s_interval, true);

  auto* s_smooth = app.add_subcommand("smooth", "solve the regularized problem");
  add_common(s_smooth, true);
  s_smooth->add_option("--rho", args.rho_override, "parameter value (overrides the instance)");

  auto* s_interp = app.add_subcommand("interp", "solve the constrained problem");
  add_common(s_interp, true);

  auto* s_bridge = app.add_subcommand("bridge", "map data between the two problems");
  add_common(s_bridge, true);
  s_bridge->add_option("--direction", direction, "z2w or w2z")
      ->required()
      ->check(CLI::IsMember({"z2w", "w2z"}));
  s_bridge->add_option("--rho", args.rho_override, "parameter value (overrides the instance)");

  auto* s_verify = app.add_subcommand("verify", "run the structural check suite");
  s_verify->add_option("file", args.file, "instance file (JSON)");
  s_verify->add_option("--out", args.out, "write the report to this path instead of stdout");
  s_verify->add_option("--format", args.format, "report format: json or text")
      ->check(CLI::IsMember({"json", "text"}));
  s_verify->add_option("--tol-rank", args.tol_rank, "override the relative rank cutoff");
  s_verify->add_option("--tol-psd", args.tol_psd, "override the semidefiniteness band");
  s_verify->add_option("--tol-res", args.tol_res, "override the residual bound");
  s_verify->add_option("--random", random_count, "verify this many generated instances");
  s_verify->add_option("--dims", dims, "domain dimension for generated instances");
  s_verify->add_option("--seed", seed, "seed for generation and sampling");

  auto* s_gen = app.add_subcommand("gen", "generate a random instance");
  s_gen->add_option("--regime", regime,
                    "INDEFINITE, SEMIDEFINITE or EMPTY_INTERVAL");
  s_gen->add_option("--dims", dims, "domain dimension")->required();
  s_gen->add_option("--seed", seed, "generator seed")->required();
  s_gen->add_option("--out", args.out, "write the instance to this path instead of stdout");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (s_interval->parsed()) return cmd_interval(args);
    if (s_smooth->parsed()) return cmd_smooth(args);
    if (s_interp->parsed()) return cmd_interp(args);
    if (s_bridge->parsed()) return cmd_bridge(args, direction);
    if (s_verify->parsed()) return cmd_verify(args, random_count, dims, seed);
    if (s_gen->parsed()) return cmd_gen(regime, dims, seed, args.out);
  } catch (const kspline::ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const kspline::NumericalError& e) {
    std::cerr << "numerical error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "numerical error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
