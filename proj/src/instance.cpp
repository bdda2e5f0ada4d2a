#include "kspline/instance.hpp"

#include "kspline/krein.hpp"
#include "kspline/smoothing.hpp"
#include "kspline/interpolation.hpp"

#include <json.hpp>

#include <fstream>
#include <sstream>

namespace kspline {

using json = nlohmann::ordered_json;

Regime parse_regime(const std::string& s) {
  if (s == "INDEFINITE") return Regime::Indefinite;
  if (s == "SEMIDEFINITE") return Regime::Semidefinite;
  if (s == "EMPTY_INTERVAL") return Regime::EmptyInterval;
  throw ValidationError("unknown regime '" + s +
                        "' (expected INDEFINITE, SEMIDEFINITE or EMPTY_INTERVAL)");
}

const char* to_string(Regime r) {
  switch (r) {
    case Regime::Indefinite: return "INDEFINITE";
    case Regime::Semidefinite: return "SEMIDEFINITE";
    case Regime::EmptyInterval: return "EMPTY_INTERVAL";
  }
  return "?";
}

namespace {

[[noreturn]] void fail(const std::string& path, const std::string& what) {
  throw ValidationError("instance field '" + path + "': " + what);
}

const json& member(const json& j, const std::string& path, const char* key) {
  if (!j.is_object()) fail(path, "expected an object");
  auto it = j.find(key);
  if (it == j.end()) fail(path + "." + key, "missing");
  return *it;
}

double number_at(const json& j, const std::string& path) {
  if (!j.is_number()) fail(path, "expected a number");
  return j.get<double>();
}

Index index_at(const json& j, const std::string& path) {
  if (!j.is_number_integer()) fail(path, "expected an integer");
  auto v = j.get<long long>();
  if (v < 1) fail(path, "must be positive");
  return static_cast<Index>(v);
}

Complex complex_at(const json& j, const std::string& path) {
  if (!j.is_array() || j.size() != 2)
    fail(path, "expected a [re, im] pair");
  return {number_at(j[0], path + "[0]"), number_at(j[1], path + "[1]")};
}

Matrix matrix_at(const json& j, const std::string& path, Index rows, Index cols) {
  if (!j.is_array()) fail(path, "expected an array of rows");
  if (static_cast<Index>(j.size()) != rows)
    fail(path, "expected " + std::to_string(rows) + " rows, got " +
                   std::to_string(j.size()));
  Matrix m(rows, cols);
  for (Index r = 0; r < rows; ++r) {
    const json& row = j[static_cast<std::size_t>(r)];
    const std::string rp = path + "[" + std::to_string(r) + "]";
    if (!row.is_array() || static_cast<Index>(row.size()) != cols)
      fail(rp, "expected " + std::to_string(cols) + " entries");
    for (Index c = 0; c < cols; ++c)
      m(r, c) = complex_at(row[static_cast<std::size_t>(c)],
                           rp + "[" + std::to_string(c) + "]");
  }
  return m;
}

Vector vector_at(const json& j, const std::string& path, Index n) {
  if (!j.is_array() || static_cast<Index>(j.size()) != n)
    fail(path, "expected " + std::to_string(n) + " entries");
  Vector v(n);
  for (Index i = 0; i < n; ++i)
    v(i) = complex_at(j[static_cast<std::size_t>(i)],
                      path + "[" + std::to_string(i) + "]");
  return v;
}

json complex_to_json(Complex z) { return json::array({z.real(), z.imag()}); }

json matrix_to_json(const Matrix& m) {
  json rows = json::array();
  for (Index r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (Index c = 0; c < m.cols(); ++c) row.push_back(complex_to_json(m(r, c)));
    rows.push_back(std::move(row));
  }
  return rows;
}

json vector_to_json(const Vector& v) {
  json out = json::array();
  for (Index i = 0; i < v.size(); ++i) out.push_back(complex_to_json(v(i)));
  return out;
}

double positive_number_at(const json& j, const std::string& path) {
  double v = number_at(j, path);
  if (!(v > 0.0)) fail(path, "must be positive");
  return v;
}

}  // namespace

InstanceFile InstanceFile::parse(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw ValidationError(std::string("instance is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) throw ValidationError("instance must be a JSON object");

  const json& field = member(j, "", "field");
  if (!field.is_string() || field.get<std::string>() != "complex")
    fail("field", "only \"complex\" is supported");

  const Index h = index_at(member(j, "", "H_dim"), "H_dim");

  const json& jk = member(j, "", "K");
  const Index dk = index_at(member(jk, "K", "dim"), "K.dim");
  const json& je = member(j, "", "E");
  const Index de = index_at(member(je, "E", "dim"), "E.dim");

  InstanceFile f;
  f.k_gram = matrix_at(member(jk, "K", "gram"), "K.gram", dk, dk);
  f.e_gram = matrix_at(member(je, "E", "gram"), "E.gram", de, de);
  f.T = matrix_at(member(j, "", "T"), "T", dk, h);
  f.V = matrix_at(member(j, "", "V"), "V", de, h);

  if (auto it = j.find("rho"); it != j.end())
    f.rho = number_at(*it, "rho");
  if (auto it = j.find("z0"); it != j.end())
    f.z0 = vector_at(*it, "z0", de);
  if (auto it = j.find("w0"); it != j.end())
    f.w0 = vector_at(*it, "w0", de);
  if (auto it = j.find("seed"); it != j.end()) {
    if (!it->is_number_unsigned()) fail("seed", "expected a nonnegative integer");
    f.seed = it->get<std::uint64_t>();
  }
  if (auto it = j.find("tolerances"); it != j.end()) {
    ToleranceProfile tol;
    tol.rank_rtol = positive_number_at(member(*it, "tolerances", "rank_rtol"),
                                       "tolerances.rank_rtol");
    tol.psd_tol = positive_number_at(member(*it, "tolerances", "psd_tol"),
                                     "tolerances.psd_tol");
    tol.residual_tol = positive_number_at(member(*it, "tolerances", "residual_tol"),
                                          "tolerances.residual_tol");
    tol.bisection_tol = positive_number_at(member(*it, "tolerances", "bisection_tol"),
                                           "tolerances.bisection_tol");
    f.tolerances = tol;
  }

  require_finite(f.k_gram, "K.gram");
  require_finite(f.e_gram, "E.gram");
  require_finite(f.T, "T");
  require_finite(f.V, "V");
  return f;
}

InstanceFile InstanceFile::load(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot open instance file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse(buf.str());
}

std::string InstanceFile::render() const {
  json j;
  j["field"] = "complex";
  j["H_dim"] = static_cast<long long>(h_dim());
  j["K"] = {{"dim", static_cast<long long>(T.rows())},
            {"gram", matrix_to_json(k_gram)}};
  j["E"] = {{"dim", static_cast<long long>(V.rows())},
            {"gram", matrix_to_json(e_gram)}};
  j["T"] = matrix_to_json(T);
  j["V"] = matrix_to_json(V);
  if (rho) j["rho"] = *rho;
  if (z0) j["z0"] = vector_to_json(*z0);
  if (w0) j["w0"] = vector_to_json(*w0);
  if (tolerances) {
    j["tolerances"] = {{"rank_rtol", tolerances->rank_rtol},
                       {"psd_tol", tolerances->psd_tol},
                       {"residual_tol", tolerances->residual_tol},
                       {"bisection_tol", tolerances->bisection_tol}};
  }
  if (seed) j["seed"] = *seed;
  return j.dump(2) + "\n";
}

void InstanceFile::save(const std::string& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ValidationError("cannot write instance file '" + path + "'");
  out << render();
}

std::string InstanceFile::digest() const {
  // FNV-1a, 64-bit, over the canonical rendering.
  const std::string text = render();
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

ToleranceProfile InstanceFile::resolve_tolerances() const {
  return tolerances ? *tolerances : ToleranceProfile{};
}

ProblemData InstanceFile::to_problem(const ToleranceProfile& tol) const {
  ProblemData data{KreinSpace(k_gram, tol), KreinSpace(e_gram, tol), T, V, tol};
  data.validate();
  return data;
}

namespace {

Matrix random_unitary(Index n, Rng& rng) {
  const Matrix g = rng.gaussian_matrix(n, n);
  Eigen::HouseholderQR<Matrix> qr(g);
  Matrix q = qr.householderQ();
  // Fix the phase so the factor is a deterministic function of g.
  const Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Index i = 0; i < n; ++i) {
    const Complex d = r(i, i);
    if (std::abs(d) > 0) q.col(i) *= d / std::abs(d);
  }
  return q;
}

/// Hermitian invertible gram with `minus` negative eigenvalues, the rest
/// positive, all with magnitude in [1/2, 3/2].
Matrix gram_with_signature(Index n, Index minus, Rng& rng) {
  const Matrix q = random_unitary(n, rng);
  RealVector d(n);
  for (Index i = 0; i < n; ++i) {
    const double mag = 0.5 + rng.uniform();
    d(i) = (i < minus) ? -mag : mag;
  }
  return hermitize(q * d.asDiagonal() * q.adjoint());
}

Matrix surjective_map(Index rows, Index cols, Rng& rng, const ToleranceProfile& tol) {
  for (int attempt = 0; attempt < 64; ++attempt) {
    Matrix m = rng.gaussian_matrix(rows, cols);
    if (rank_factor(m, tol).rank == rows) return m;
  }
  throw NumericalError("failed to draw a surjective map");
}

/// Scales v to a norm in [1/2, 3/2]; leaves (numerically) zero vectors alone.
void rescale(Vector& v, Rng& rng) {
  const double n = v.norm();
  if (n > 1e-9) v *= (0.5 + rng.uniform()) / n;
}

/// z0 admissible for the pencil at rho: V^# z0 must lie in the pencil range.
/// The rank cutoff for the obstruction (I - P_range) V^# is taken relative
/// to the scale of V^# itself: when the pencil has full range the
/// obstruction is pure roundoff, and a cutoff relative to its own largest
/// singular value would mistake that noise for a full-rank obstruction.
Vector admissible_rhs(const ProblemData& data, const GramPair& grams, double rho,
                      const ToleranceProfile& tol, Rng& rng) {
  const Matrix pencil = grams.A + rho * grams.B;
  const Subspace range = rank_factor(pencil, tol).col_space;
  const Matrix vsharp = data.V.adjoint() * data.E.gram();
  const Matrix obstruction =
      vsharp - range.basis() * (range.basis().adjoint() * vsharp);
  Eigen::JacobiSVD<Matrix> svd(obstruction, Eigen::ComputeFullV);
  const double cutoff = tol.rank_rtol * vsharp.norm();
  Index rank = 0;
  for (Index i = 0; i < svd.singularValues().size(); ++i)
    if (svd.singularValues()(i) > cutoff) ++rank;
  const Index nullity = vsharp.cols() - rank;
  Vector z = Vector::Zero(data.V.rows());
  if (nullity > 0) {
    z = svd.matrixV().rightCols(nullity) * rng.gaussian_vector(nullity);
    rescale(z, rng);
  }
  return z;
}

/// A constrained right-hand side with at least one solution: the image of a
/// random W-vector under V.
Vector reachable_rhs(const ProblemData& data, Rng& rng) {
  const ConstraintSubspaces cs = constraint_subspaces(data);
  Vector w = data.V * (cs.W.basis() * rng.gaussian_vector(cs.W.dim()));
  rescale(w, rng);
  return w;
}

}  // namespace

InstanceFile gen_instance(Index dims, Regime regime, std::uint64_t seed) {
  if (dims < 2) throw ValidationError("gen: dims must be at least 2");
  const ToleranceProfile tol;
  Rng rng(seed);

  for (int attempt = 0; attempt < 256; ++attempt) {
    const Index h = dims;
    // Keep both ranges at least 2-dimensional so indefinite grams exist and
    // the maps are rarely injective.
    const Index dk = 2 + static_cast<Index>(rng.index(static_cast<std::size_t>(h - 1)));
    const Index de = 2 + static_cast<Index>(rng.index(static_cast<std::size_t>(h - 1)));

    Matrix gk, ge;
    switch (regime) {
      case Regime::Indefinite:
        // Positive-definite penalty gram keeps the quadratic term PSD, so
        // the admissible interval contains 0 and is nonempty by construction.
        gk = (rng.uniform() < 0.5)
                 ? Matrix(Matrix::Identity(dk, dk))
                 : gram_with_signature(dk, 0, rng);
        ge = gram_with_signature(
            de, 1 + static_cast<Index>(rng.index(static_cast<std::size_t>(de - 1))),
            rng);
        break;
      case Regime::Semidefinite:
        gk = gram_with_signature(dk, (rng.uniform() < 0.5) ? dk : 0, rng);
        ge = (rng.uniform() < 0.5) ? gram_with_signature(de, 0, rng)
                                   : gram_with_signature(de, de, rng);
        break;
      case Regime::EmptyInterval:
        // An indefinite penalty gram lets the quadratic term pick up
        // negative directions that no parameter value can compensate.
        gk = gram_with_signature(
            dk, 1 + static_cast<Index>(rng.index(static_cast<std::size_t>(dk - 1))),
            rng);
        ge = gram_with_signature(
            de, 1 + static_cast<Index>(rng.index(static_cast<std::size_t>(de - 1))),
            rng);
        break;
    }

    InstanceFile f;
    f.k_gram = gk;
    f.e_gram = ge;
    f.T = surjective_map(dk, h, rng, tol);
    f.V = surjective_map(de, h, rng, tol);
    f.seed = seed;

    ProblemData data{KreinSpace(gk, tol), KreinSpace(ge, tol), f.T, f.V, tol};
    try {
      data.validate();
    } catch (const ValidationError&) {
      continue;
    }

    const GramPair grams = build_grams(data);
    const Inertia bi = inertia(grams.B, tol);

    if (regime == Regime::Semidefinite) {
      if (bi.indefinite()) continue;  // want a one-signed constraint form
      Vector z = rng.gaussian_vector(de);
      rescale(z, rng);
      f.z0 = z;
      f.w0 = reachable_rhs(data, rng);
      return f;
    }

    // Indefinite regimes need a genuinely two-signed constraint form.
    if (!bi.indefinite()) continue;

    const AdmissibleInterval ival = admissible_interval(grams.A, grams.B, tol);
    if (regime == Regime::EmptyInterval) {
      if (ival.status != IntervalStatus::Empty) continue;
      Vector z = rng.gaussian_vector(de);
      rescale(z, rng);
      f.z0 = z;
      f.w0 = reachable_rhs(data, rng);
      return f;
    }

    // Knife-edge intervals (collapsed to a point, or barely wider than the
    // endpoint resolution) put every downstream quantity at tolerance scale;
    // they are valid mathematics but useless as test instances.
    if (ival.status != IntervalStatus::Interval) continue;
    if (ival.width() < 1e-3) continue;
    double rho = 0.0;
    if (!ival.pick_nonzero(0.1, &rho)) continue;

    // Reject draws whose admissible right-hand sides are only the zero
    // vector; they make every downstream exercise vacuous.
    Vector z = admissible_rhs(data, grams, rho, tol, rng);
    if (z.norm() < 1e-9) continue;

    f.rho = rho;
    f.z0 = z;
    f.w0 = reachable_rhs(data, rng);
    return f;
  }
  throw NumericalError("gen: no instance of the requested regime found (seed " +
                       std::to_string(seed) + ")");
}

}  // namespace kspline
