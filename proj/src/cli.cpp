#include "obtuse_walks/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <chrono>
#include <iostream>
#include <optional>
#include <random>

#include "obtuse_walks/errors.hpp"

namespace obtuse_walks::cli {

namespace {

using io::Json;

class RunReport {
 public:
  explicit RunReport(std::string command)
      : command_(std::move(command)), start_(std::chrono::steady_clock::now()) {}

  void add_input(const std::string& path) {
    Json in = Json::object();
    in["path"] = path;
    in["sha256"] = io::file_sha256(path);
    inputs_.push_back(std::move(in));
  }

  void tolerance(const std::string& name, double value) { tolerances_[name] = value; }

  /// Records value <= threshold as a named check.
  bool check(const std::string& name, double value, double threshold) {
    const bool ok = value <= threshold;
    Json c = Json::object();
    c["name"] = name;
    c["value"] = value;
    c["threshold"] = threshold;
    c["passed"] = ok;
    checks_.push_back(std::move(c));
    passed_ = passed_ && ok;
    return ok;
  }

  void flag(const std::string& name, bool ok) {
    Json c = Json::object();
    c["name"] = name;
    c["passed"] = ok;
    checks_.push_back(std::move(c));
    passed_ = passed_ && ok;
  }

  Json& results() { return results_; }
  bool passed() const { return passed_; }

  Json to_json() const {
    Json j = Json::object();
    j["command"] = command_;
    j["inputs"] = inputs_;
    j["tolerances"] = tolerances_;
    j["passed"] = passed_;
    j["checks"] = checks_;
    j["results"] = results_;
    const std::chrono::duration<double> dt = std::chrono::steady_clock::now() - start_;
    j["wall_time_s"] = dt.count();
    return io::with_schema(std::move(j));
  }

 private:
  std::string command_;
  std::chrono::steady_clock::time_point start_;
  Json inputs_ = Json::array();
  Json tolerances_ = Json::object();
  Json checks_ = Json::array();
  Json results_ = Json::object();
  bool passed_ = true;
};

struct Globals {
  std::optional<double> tol;
  std::uint64_t seed = 0;
  int indent = 2;
  bool quiet = false;

  double tol_or(double fallback) const { return tol.value_or(fallback); }
};

struct Context {
  const Globals& g;
  std::ostream& out;
  std::ostream& err;

  int finish(const RunReport& r, int code) const {
    if (!g.quiet) out << r.to_json().dump(g.indent) << '\n';
    return code;
  }

  void write(const std::string& path, const Json& artifact) const {
    io::write_json_file(path, io::with_schema(artifact), g.indent);
  }
};

ObtuseSystem load_system(RunReport& r, const std::string& path) {
  r.add_input(path);
  return io::system_from_json(io::read_json_file(path));
}

BlockUnitary load_u(RunReport& r, const std::string& path) {
  r.add_input(path);
  return io::block_unitary_from_json(io::read_json_file(path));
}

ComplexMatrix load_matrix(RunReport& r, const std::string& path) {
  r.add_input(path);
  return io::matrix_from_json(io::read_json_file(path));
}

ClassicalForm load_form(RunReport& r, const std::string& path) {
  r.add_input(path);
  return io::form_from_json(io::read_json_file(path));
}

void add_validation(RunReport& r, const ObtuseValidation& v) {
  r.check("probability_sum", v.probability_sum, v.tol);
  r.flag("probabilities_in_open_unit_interval", v.probabilities_in_range);
  r.check("mean", v.mean, v.tol);
  r.check("covariance", v.covariance, v.tol);
  r.check("inner_product", v.inner_product, v.tol);
  r.check("probability_norm", v.probability, v.tol);
  r.check("unitarity", v.unitarity, v.tol);
  Json groups = Json::object();
  groups["centered_normalized"] = v.centered_normalized_ok();
  groups["obtuse_values"] = v.obtuse_values_ok();
  groups["unitary_matrix"] = v.unitary_ok();
  r.results()["conditions"] = std::move(groups);
}

void add_detection(RunReport& r, const DetectionReport& d) {
  r.check("input_unitarity", d.input_unitarity, kStructuralTol);
  r.check("coefficient_residual", d.coefficient_residual, d.tol);
  r.check("w_unitarity_residual", d.w_unitarity_residual, d.tol);
  auto& res = r.results();
  res["accepted"] = d.accepted;
  res["failed_check"] = d.failed_check;
  res["worst_block"] = Json::array({d.worst_i, d.worst_j});
  res["worst_w"] = d.worst_l;
  res["w_residuals"] = d.w_residuals;
}

// ---------------------------------------------------------------- obtuse

int obtuse_gen(const Context& ctx, int dim, const std::vector<double>& probs,
               const std::string& output) {
  RunReport r("obtuse gen");
  const double tol = ctx.g.tol_or(kDefaultTol);
  r.tolerance("tol", tol);
  std::optional<std::vector<double>> law;
  if (!probs.empty()) law = probs;
  const ObtuseSystem x = generate_obtuse(dim, law, ctx.g.seed);
  add_validation(r, validate_obtuse(x, tol));
  r.results()["seed"] = ctx.g.seed;
  if (output.empty()) {
    r.results()["artifact"] = io::system_to_json(x);
  } else {
    ctx.write(output, io::system_to_json(x));
    r.results()["output"] = output;
  }
  return ctx.finish(r, r.passed() ? kOk : kSemanticFailure);
}

int obtuse_check(const Context& ctx, const std::string& input) {
  RunReport r("obtuse check");
  const double tol = ctx.g.tol_or(kDefaultTol);
  r.tolerance("tol", tol);
  const ObtuseSystem x = load_system(r, input);
  add_validation(r, validate_obtuse(x, tol));
  return ctx.finish(r, r.passed() ? kOk : kSemanticFailure);
}

// ---------------------------------------------------------------- tensor

int tensor_compute(const Context& ctx, const std::string& input, const std::string& output) {
  RunReport r("tensor compute");
  const double tol = ctx.g.tol_or(kDefaultTol);
  r.tolerance("tol", tol);
  const ObtuseSystem x = load_system(r, input);
  const ThreeTensor t = compute_tensor(x, tol);
  r.check("product_identity", product_identity_residual(t, x), tol);
  const auto s = check_sesqui_symmetry(t, tol);
  r.check("index_symmetry", s.index_symmetry, tol);
  r.check("product_symmetry", s.product_symmetry, tol);
  r.flag("extended_entries_exact", s.extended_entries_exact);
  if (output.empty()) {
    r.results()["artifact"] = io::tensor_to_json(t);
  } else {
    ctx.write(output, io::tensor_to_json(t));
    r.results()["output"] = output;
  }
  return ctx.finish(r, r.passed() ? kOk : kSemanticFailure);
}

int tensor_check(const Context& ctx, const std::string& input) {
  RunReport r("tensor check");
  const double tol = ctx.g.tol_or(kDefaultTol);
  r.tolerance("tol", tol);
  r.add_input(input);
  const ThreeTensor t = io::tensor_from_json(io::read_json_file(input));
  const auto s = check_sesqui_symmetry(t, tol);
  r.check("index_symmetry", s.index_symmetry, tol);
  r.check("product_symmetry", s.product_symmetry, tol);
  r.flag("extended_entries_exact", s.extended_entries_exact);
  return ctx.finish(r, r.passed() ? kOk : kSemanticFailure);
}

// ---------------------------------------------------------------- noise

int noise_repr(const Context& ctx, const std::string& input, int coord, const std::string& output) {
  RunReport r("noise repr");
  const double tol = ctx.g.tol_or(kDefaultTol);
  r.tolerance("tol", tol);
  const ObtuseSystem x = load_system(r, input);
  const ThreeTensor t = compute_tensor(x, tol);
  if (coord == 0) {
    ctx.err << "note: coordinate 0 is the constant one; its operator is the identity\n";
    r.results()["note"] = "coordinate 0 is the constant one; its operator is the identity";
  }
  const ComplexMatrix m = multiplication_operator(x, t, coord);
  r.check("hermitian", (m - m.adjoint()).norm(), 0.0);
  r.results()["coordinate"] = coord;
  if (output.empty()) {
    r.results()["artifact"] = io::matrix_to_json(m);
  } else {
    ctx.write(output, io::matrix_to_json(m));
    r.results()["output"] = output;
  }
  return ctx.finish(r, r.passed() ? kOk : kSemanticFailure);
}

int noise_diag(const Context& ctx, const std::string& input) {
  RunReport r("noise diag");
  const double tol = ctx.g.tol_or(kDefaultTol);
  r.tolerance("tol", tol);
  const ObtuseSystem x = load_system(r, input);
  const ThreeTensor t = compute_tensor(x, tol);
  const ComplexMatrix theta = path_basis_unitary(x, tol);
  Json coords = Json::array();
  double worst_spectrum = 0.0;
  double worst_conj = 0.0;
  for (int i = 1; i <= x.dim; ++i) {
    const ComplexMatrix m = multiplication_operator(x, t, i);
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> eig(m, Eigen::EigenvaluesOnly);
    std::vector<double> spectrum(eig.eigenvalues().data(), eig.eigenvalues().data() + eig.eigenvalues().size());
    std::vector<double> table(static_cast<std::size_t>(x.dim) + 1);
    for (int l = 0; l <= x.dim; ++l) table[static_cast<std::size_t>(l)] = x.values(i - 1, l);
    std::sort(table.begin(), table.end());
    double gap = 0.0;
    for (std::size_t k = 0; k < table.size(); ++k) gap = std::max(gap, std::abs(spectrum[k] - table[k]));
    ComplexMatrix target = ComplexMatrix::Zero(x.dim + 1, x.dim + 1);
    for (int l = 0; l <= x.dim; ++l) target(l, l) = x.values(i - 1, l);
    const double conj = (theta.adjoint() * m * theta - target).cwiseAbs().maxCoeff();
    worst_spectrum = std::max(worst_spectrum, gap);
    worst_conj = std::max(worst_conj, conj);
    Json c = Json::object();
    c["coordinate"] = i;
    c["spectrum"] = spectrum;
    c["values_sorted"] = table;
    c["spectrum_gap"] = gap;
    c["conjugation_residual"] = conj;
    coords.push_back(std::move(c));
  }
  r.check("spectrum_matches_values", worst_spectrum, tol);
  r.check("path_basis_diagonalizes", worst_conj, tol);
  r.results()["coordinates"] = std::move(coords);
  return ctx.finish(r, r.passed() ? kOk : kSemanticFailure);
}

// ---------------------------------------------------------------- u

int u_build(const Context& ctx, const std::string& system_path, const std::vector<std::string>& w_paths,
            const std::string& output) {
  RunReport r("u build");
  r.tolerance("structural", kStructuralTol);
  const ObtuseSystem x = load_system(r, system_path);
  std::vector<ComplexMatrix> w;
  for (const auto& p : w_paths) w.push_back(load_matrix(r, p));
  if (w.empty()) throw MalformedInputError("u build needs W_0 ... W_N");
  const BlockUnitary u = build_u(w, x);
  r.check("unitarity", u.unitarity_residual(), kDefaultTol);
  if (output.empty()) {
    r.results()["artifact"] = io::block_unitary_to_json(u);
  } else {
    ctx.write(output, io::block_unitary_to_json(u));
    r.results()["output"] = output;
  }
  return ctx.finish(r, r.passed() ? kOk : kSemanticFailure);
}

int u_bernoulli(const Context& ctx, double p, const std::vector<std::string>& w_paths,
                const std::string& output) {
  RunReport r("u bernoulli");
  r.tolerance("structural", kStructuralTol);
  if (w_paths.size() != 2) throw MalformedInputError("u bernoulli needs exactly W_0 and W_1");
  const ComplexMatrix w0 = load_matrix(r, w_paths[0]);
  const ComplexMatrix w1 = load_matrix(r, w_paths[1]);
  const BlockUnitary u = build_u_bernoulli(w0, w1, p);
  r.check("unitarity", u.unitarity_residual(), kDefaultTol);
  r.results()["p"] = p;
  if (output.empty()) {
    r.results()["artifact"] = io::block_unitary_to_json(u);
  } else {
    ctx.write(output, io::block_unitary_to_json(u));
    r.results()["output"] = output;
  }
  return ctx.finish(r, r.passed() ? kOk : kSemanticFailure);
}

int u_detect(const Context& ctx, const std::string& u_path, const std::string& system_path,
             const std::string& output) {
  RunReport r("u detect");
  const double tol = ctx.g.tol_or(1e-8);
  r.tolerance("tol", tol);
  r.tolerance("structural", kStructuralTol);
  const BlockUnitary u = load_u(r, u_path);
  const ObtuseSystem x = load_system(r, system_path);
  const DetectionReport d = detect_classical(u, x, tol);
  add_detection(r, d);
  if (d.accepted && !output.empty()) {
    ctx.write(output, io::form_to_json(*d.form));
    r.results()["output"] = output;
  }
  return ctx.finish(r, d.accepted ? kOk : kSemanticFailure);
}

// ---------------------------------------------------------------- walk

int walk_simulate(const Context& ctx, const std::string& form_path, int steps, std::size_t trajectories,
                  bool full, const std::string& output) {
  RunReport r("walk simulate");
  const ClassicalForm form = load_form(r, form_path);
  if (steps < 0) throw DomainError("--steps must be non-negative");
  if (trajectories < 1) throw DomainError("--trajectories must be positive");
  const double budget = std::max(1, steps) * 1e-12;
  r.tolerance("unitarity_budget", budget);

  Json trajs = Json::array();
  double worst = 0.0;
  for (std::size_t t = 0; t < trajectories; ++t) {
    const auto seed = trajectory_seed(ctx.g.seed, t);
    const WalkTrajectory traj = simulate(form, steps, seed);
    Json j = Json::object();
    j["seed"] = seed;
    j["steps"] = traj.steps;
    j["final"] = io::matrix_to_json(traj.states.back());
    if (full) {
      Json states = Json::array();
      for (const auto& v : traj.states) states.push_back(io::matrix_to_json(v));
      j["states"] = std::move(states);
    }
    for (const auto& v : traj.states) worst = std::max(worst, unitarity_residual(v));
    trajs.push_back(std::move(j));
  }
  r.check("state_unitarity", worst, budget);
  Json artifact = Json::object();
  artifact["base_seed"] = ctx.g.seed;
  artifact["n_steps"] = steps;
  artifact["trajectories"] = std::move(trajs);
  if (output.empty()) {
    r.results()["artifact"] = std::move(artifact);
  } else {
    ctx.write(output, artifact);
    r.results()["output"] = output;
  }
  return ctx.finish(r, r.passed() ? kOk : kSemanticFailure);
}

int walk_dist(const Context& ctx, const std::string& form_path, int steps, double merge_tol,
              const std::string& output) {
  RunReport r("walk dist");
  r.tolerance("merge_tol", merge_tol);
  const ClassicalForm form = load_form(r, form_path);
  const WalkDistribution d = exact_distribution(form, steps, merge_tol);
  r.check("total_probability", std::abs(d.total_probability() - 1.0), 1e-12);
  r.results()["atoms"] = d.atoms.size();
  if (output.empty()) {
    r.results()["artifact"] = io::distribution_to_json(d);
  } else {
    ctx.write(output, io::distribution_to_json(d));
    r.results()["output"] = output;
  }
  return ctx.finish(r, r.passed() ? kOk : kSemanticFailure);
}

int walk_verify(const Context& ctx, const std::string& u_path, const std::string& system_path, int steps) {
  RunReport r("walk verify");
  const double tol = ctx.g.tol_or(1e-9);
  r.tolerance("tol", tol);
  const BlockUnitary u = load_u(r, u_path);
  const ObtuseSystem x = load_system(r, system_path);
  if (steps < 1) throw DomainError("--steps must be positive");
  check_chain_guard(u.system_dim(), u.site_dim(), steps, guard_override_from_env());
  const DetectionReport d = detect_classical(u, x, 1e-8);
  add_detection(r, d);
  if (!d.accepted) {
    r.results()["note"] = "block unitary is not classical for this obtuse system";
    return ctx.finish(r, kSemanticFailure);
  }
  const auto v = verify_block_diagonalization(u, *d.form, steps, tol);
  r.check("off_diagonal", v.off_diagonal, tol);
  r.check("block_mismatch", v.block_mismatch, tol);
  r.results()["paths"] = v.paths;
  r.results()["steps"] = steps;
  return ctx.finish(r, r.passed() ? kOk : kSemanticFailure);
}

int demo(const Context& ctx, double p, int steps) {
  RunReport r("demo");
  Json body = pipeline_demo(p, ctx.g.seed, steps);
  for (const auto& c : body["checks"]) {
    if (c.contains("value")) {
      r.check(c["name"].get<std::string>(), c["value"].get<double>(), c["threshold"].get<double>());
    } else {
      r.flag(c["name"].get<std::string>(), c["passed"].get<bool>());
    }
  }
  r.results() = body["results"];
  return ctx.finish(r, r.passed() ? kOk : kSemanticFailure);
}

}  // namespace

io::Json pipeline_demo(double p, std::uint64_t seed, int steps) {
  if (!(p > 0.0 && p < 1.0)) {
    throw DomainError("p must lie in (0,1)");
  }
  Json checks = Json::array();
  auto check = [&](const std::string& name, double value, double threshold) {
    Json c = Json::object();
    c["name"] = name;
    c["value"] = value;
    c["threshold"] = threshold;
    c["passed"] = value <= threshold;
    checks.push_back(std::move(c));
  };

  const ObtuseSystem x = generate_obtuse(1, std::vector<double>{p, 1.0 - p}, seed);
  const ThreeTensor t = compute_tensor(x);
  const double q = 1.0 - p;
  const double c_p = t(1, 1, 1);
  check("c_p_closed_form", std::abs(c_p - (q - p) / std::sqrt(p * q)), 1e-12);

  std::mt19937_64 rng(seed);
  const std::vector<ComplexMatrix> w{random_unitary(2, rng), random_unitary(2, rng)};
  const BlockUnitary generic = build_u(w, x);
  const BlockUnitary bernoulli = build_u_bernoulli(w[0], w[1], p);
  check("generic_vs_closed_form", (generic.to_dense() - bernoulli.to_dense()).norm(), 1e-12);
  check("u_unitarity", generic.unitarity_residual(), 1e-10);

  const DetectionReport d = detect_classical(bernoulli, x);
  Json results = Json::object();
  results["p"] = p;
  results["c_p"] = c_p;
  results["seed"] = seed;
  results["accepted"] = d.accepted;
  results["failed_check"] = d.failed_check;
  if (!d.accepted) {
    check("detect_classical", d.coefficient_residual + d.w_unitarity_residual, 1e-8);
    Json out = Json::object();
    out["checks"] = std::move(checks);
    out["results"] = std::move(results);
    return out;
  }
  const ClassicalForm& form = *d.form;
  double w_gap = 0.0;
  for (std::size_t l = 0; l < 2; ++l) w_gap = std::max(w_gap, (form.w[l] - w[l]).norm());
  check("w_round_trip", w_gap, 1e-9);
  check("b0_is_u00", (form.b[0] - bernoulli.block(0, 0)).norm(), 1e-12);
  check("b1_is_u01", (form.b[1] - bernoulli.block(0, 1)).norm(), 1e-12);
  check("b1_is_u10", (form.b[1] - bernoulli.block(1, 0)).norm(), 1e-12);

  const WalkTrajectory traj = simulate(form, steps, seed);
  double drift = 0.0;
  for (const auto& v : traj.states) drift = std::max(drift, unitarity_residual(v));
  check("trajectory_unitarity", drift, std::max(1, steps) * 1e-12);

  const auto v = verify_block_diagonalization(bernoulli, form, steps);
  check("path_off_diagonal", v.off_diagonal, 1e-9);
  check("path_block_mismatch", v.block_mismatch, 1e-9);

  results["steps"] = steps;
  results["trajectory"] = traj.steps;
  results["final_state"] = io::matrix_to_json(traj.states.back());
  Json out = Json::object();
  out["checks"] = std::move(checks);
  out["results"] = std::move(results);
  return out;
}

int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Obtuse random variables, quantum noises and unitary random walks", "obtuse-walks"};
  app.require_subcommand(1);
  app.fallthrough();

  Globals g;
  app.add_option("--tol", g.tol, "Tolerance override for the command's checks");
  app.add_option("--seed", g.seed, "Random seed");
  app.add_option("--json-indent", g.indent, "Indentation of JSON output")->check(CLI::Range(-1, 16));
  app.add_flag("--quiet", g.quiet, "Do not print the JSON report");

  std::function<int()> action;
  auto bind = [&action](CLI::App* sub, std::function<int()> f) {
    sub->callback([&action, f = std::move(f)] { action = f; });
  };

  // obtuse
  auto* obtuse = app.add_subcommand("obtuse", "Obtuse random variables");
  obtuse->require_subcommand(1);
  int dim = 0;
  std::vector<double> probs;
  std::string output;
  std::string in1;
  std::string in2;
  auto* gen = obtuse->add_subcommand("gen", "Generate an obtuse system");
  gen->add_option("--dim", dim, "Dimension N")->required();
  gen->add_option("--probs", probs, "Probabilities p0,...,pN")->delimiter(',');
  gen->add_option("-o,--output", output, "Output file");
  auto* ocheck = obtuse->add_subcommand("check", "Validate an obtuse system");
  ocheck->add_option("system", in1, "System JSON")->required();

  // tensor
  auto* tensor = app.add_subcommand("tensor", "Three-tensor of an obtuse system");
  tensor->require_subcommand(1);
  auto* tcompute = tensor->add_subcommand("compute", "Compute the three-tensor");
  tcompute->add_option("system", in1, "System JSON")->required();
  tcompute->add_option("-o,--output", output, "Output file");
  auto* tcheck = tensor->add_subcommand("check", "Check sesqui-symmetry");
  tcheck->add_option("tensor", in1, "Tensor JSON")->required();

  // noise
  auto* noise = app.add_subcommand("noise", "Quantum-noise representation");
  noise->require_subcommand(1);
  int coord = 1;
  auto* repr = noise->add_subcommand("repr", "Multiplication operator of a coordinate");
  repr->add_option("system", in1, "System JSON")->required();
  repr->add_option("--coord", coord, "Coordinate index")->required();
  repr->add_option("-o,--output", output, "Output file");
  auto* diag = noise->add_subcommand("diag", "Spectra against the value table");
  diag->add_option("system", in1, "System JSON")->required();

  // u
  auto* ucmd = app.add_subcommand("u", "Block unitaries");
  ucmd->require_subcommand(1);
  std::vector<std::string> files;
  double p = 0.5;
  auto* ubuild = ucmd->add_subcommand("build", "Build U from W_0 ... W_N");
  ubuild->add_option("system", in1, "System JSON")->required();
  ubuild->add_option("w", files, "W_0 ... W_N matrix JSON files")->required();
  ubuild->add_option("-o,--output", output, "Output file");
  auto* udetect = ucmd->add_subcommand("detect", "Detect a classical form");
  udetect->add_option("u", in1, "Block unitary JSON")->required();
  udetect->add_option("system", in2, "System JSON")->required();
  udetect->add_option("-o,--output", output, "Write the classical form here on success");
  auto* ubern = ucmd->add_subcommand("bernoulli", "Closed-form N = 1 block unitary");
  ubern->add_option("--p", p, "Probability of outcome 0")->required();
  ubern->add_option("w", files, "W_0 and W_1 matrix JSON files")->required();
  ubern->add_option("-o,--output", output, "Output file");

  // walk
  auto* walk = app.add_subcommand("walk", "Unitary random walks");
  walk->require_subcommand(1);
  int steps = 1;
  std::size_t trajectories = 1;
  bool full = false;
  double merge_tol = 1e-9;
  auto* wsim = walk->add_subcommand("simulate", "Simulate trajectories");
  wsim->add_option("form", in1, "Classical form JSON")->required();
  wsim->add_option("--steps", steps, "Number of steps")->required();
  wsim->add_option("--trajectories", trajectories, "Number of trajectories");
  wsim->add_flag("--full", full, "Record every intermediate state");
  wsim->add_option("-o,--output", output, "Output file");
  auto* wdist = walk->add_subcommand("dist", "Exact law of V_n");
  wdist->add_option("form", in1, "Classical form JSON")->required();
  wdist->add_option("--steps", steps, "Horizon n")->required();
  wdist->add_option("--merge-tol", merge_tol, "Frobenius distance under which atoms merge");
  wdist->add_option("-o,--output", output, "Output file");
  auto* wverify = walk->add_subcommand("verify", "Path-basis block diagonalization");
  wverify->add_option("u", in1, "Block unitary JSON")->required();
  wverify->add_option("system", in2, "System JSON")->required();
  wverify->add_option("--steps", steps, "Number of sites")->required();

  auto* demo_cmd = app.add_subcommand("demo", "End-to-end N = 1 pipeline");
  demo_cmd->add_option("--p", p, "Probability of outcome 0")->required();
  demo_cmd->add_option("--steps", steps, "Number of sites / walk steps");

  const Context ctx{g, out, err};
  bind(gen, [&] { return obtuse_gen(ctx, dim, probs, output); });
  bind(ocheck, [&] { return obtuse_check(ctx, in1); });
  bind(tcompute, [&] { return tensor_compute(ctx, in1, output); });
  bind(tcheck, [&] { return tensor_check(ctx, in1); });
  bind(repr, [&] { return noise_repr(ctx, in1, coord, output); });
  bind(diag, [&] { return noise_diag(ctx, in1); });
  bind(ubuild, [&] { return u_build(ctx, in1, files, output); });
  bind(udetect, [&] { return u_detect(ctx, in1, in2, output); });
  bind(ubern, [&] { return u_bernoulli(ctx, p, files, output); });
  bind(wsim, [&] { return walk_simulate(ctx, in1, steps, trajectories, full, output); });
  bind(wdist, [&] { return walk_dist(ctx, in1, steps, merge_tol, output); });
  bind(wverify, [&] { return walk_verify(ctx, in1, in2, steps); });
  bind(demo_cmd, [&] { return demo(ctx, p, demo_cmd->count("--steps") ? steps : 4); });

  std::vector<const char*> argv;
  argv.reserve(args.size());
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n" << app.help();
    return kMalformed;
  }

  if (!action) {
    err << app.help();
    return kMalformed;
  }
  try {
    return action();
  } catch (const MalformedInputError& e) {
    err << "malformed input: " << e.what() << '\n';
    return kMalformed;
  } catch (const DomainError& e) {
    err << "domain error: " << e.what() << '\n';
    return kMalformed;
  } catch (const ResourceGuardError& e) {
    err << "resource guard: " << e.what() << '\n';
    return kResourceGuard;
  }
}

}  // namespace obtuse_walks::cli
