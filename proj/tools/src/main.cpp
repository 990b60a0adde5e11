#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "spinbath/lindblad.hpp"
#include "spinbath/model.hpp"
#include "spinbath/rqi.hpp"
#include "spinbath/sampling.hpp"
#include "spinbath/steady.hpp"
#include "spinbath/thermo.hpp"

using json = nlohmann::ordered_json;
using namespace spinbath;

namespace {

// ---- config loading ----

struct Config {
  LindbladModel model;
  json analysis;  // command-specific options, validated per command
  std::string digest;
};

std::string fnv1a_hex(const std::string& bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (const unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

void reject_unknown_keys(const json& obj, const std::vector<std::string>& allowed,
                         const std::string& where) {
  for (const auto& [key, value] : obj.items()) {
    (void)value;
    bool ok = false;
    for (const auto& a : allowed) {
      if (key == a) {
        ok = true;
        break;
      }
    }
    if (!ok) {
      throw std::invalid_argument("config: unknown key \"" + key + "\" in " + where);
    }
  }
}

double parse_beta(const json& v) {
  if (v.is_number()) return v.get<double>();
  if (v.is_string()) {
    const auto s = v.get<std::string>();
    if (s == "inf" || s == "+inf") return std::numeric_limits<double>::infinity();
  }
  throw std::invalid_argument("config: beta must be a number or \"inf\"");
}

Config load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw std::invalid_argument("config: cannot open " + path);
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  const std::string bytes = buf.str();

  json j;
  try {
    j = json::parse(bytes);
  } catch (const json::parse_error& e) {
    throw std::invalid_argument(std::string("config: invalid JSON: ") + e.what());
  }
  if (!j.is_object()) {
    throw std::invalid_argument("config: top level must be an object");
  }
  reject_unknown_keys(j, {"schema_version", "n_sites", "b_field", "jx", "jy", "baths", "analysis"},
                      "top level");
  if (!j.contains("schema_version") || !j["schema_version"].is_number_integer() ||
      j["schema_version"].get<int>() != 1) {
    throw std::invalid_argument("config: schema_version must be the integer 1");
  }
  if (!j.contains("n_sites") || !j["n_sites"].is_number_integer()) {
    throw std::invalid_argument("config: n_sites must be an integer");
  }

  ChainParams chain;
  chain.n_sites = j["n_sites"].get<int>();
  auto num = [&j](const char* key, double fallback) {
    if (!j.contains(key)) return fallback;
    if (!j[key].is_number()) {
      throw std::invalid_argument(std::string("config: ") + key + " must be a number");
    }
    return j[key].get<double>();
  };
  chain.b_field = num("b_field", 1.0);
  chain.jx = num("jx", 1.0);
  chain.jy = num("jy", 1.0);

  if (!j.contains("baths") || !j["baths"].is_array()) {
    throw std::invalid_argument("config: baths must be an array");
  }
  std::vector<BathSpec> baths;
  for (const auto& b : j["baths"]) {
    if (!b.is_object()) {
      throw std::invalid_argument("config: each bath must be an object");
    }
    reject_unknown_keys(b, {"site", "beta"}, "baths[]");
    if (!b.contains("site") || !b["site"].is_number_integer() || !b.contains("beta")) {
      throw std::invalid_argument("config: each bath needs an integer site and a beta");
    }
    baths.push_back(make_bath(b["site"].get<int>(), parse_beta(b["beta"])));
  }

  Config cfg;
  cfg.model = make_model(chain, baths);
  if (j.contains("analysis")) {
    if (!j["analysis"].is_object()) {
      throw std::invalid_argument("config: analysis must be an object");
    }
    cfg.analysis = j["analysis"];
  } else {
    cfg.analysis = json::object();
  }
  cfg.digest = fnv1a_hex(bytes);
  return cfg;
}

// ---- output helpers ----

json matrix_json(const Matrix& m) {
  json data = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      data.push_back({m(i, j).real(), m(i, j).imag()});
    }
  }
  return json{{"rows", m.rows()}, {"cols", m.cols()}, {"data", std::move(data)}};
}

json finite_or_string(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return v;
}

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

void emit(const std::string& text, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(out_path, std::ios::binary);
  if (!out) {
    throw std::runtime_error("cannot write " + out_path);
  }
  out << text;
}

struct Timer {
  std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  }
};

json report_envelope(const std::string& command, const Config& cfg, const Timer& timer) {
  return json{{"command", command},
              {"schema_version", 1},
              {"config_digest", cfg.digest},
              {"wall_time_s", timer.seconds()}};
}

// Stationary state that commands may require to be unique.
StationaryReport require_unique_stationary(const LindbladModel& model) {
  auto rep = stationary_state(model);
  if (rep.kernel_dimension != 1) {
    throw contract_violation("stationary kernel has dimension " +
                             std::to_string(rep.kernel_dimension) + ", expected 1");
  }
  return rep;
}

// ---- commands ----

int cmd_build(const Config& cfg, const std::string& out_path) {
  Timer timer;
  reject_unknown_keys(cfg.analysis, {}, "analysis (build)");
  const Matrix h = chain_hamiltonian(cfg.model.chain);
  const auto eig = herm_eig(h);
  const auto jumps = jump_operators(cfg.model);

  json rep = report_envelope("build", cfg, timer);
  rep["n_sites"] = cfg.model.chain.n_sites;
  rep["b_field"] = cfg.model.chain.b_field;
  rep["jx"] = cfg.model.chain.jx;
  rep["jy"] = cfg.model.chain.jy;
  json evs = json::array();
  for (Eigen::Index i = 0; i < eig.eigenvalues.size(); ++i) evs.push_back(eig.eigenvalues(i));
  rep["hamiltonian_eigenvalues"] = std::move(evs);
  json jj = json::array();
  for (const auto& op : jumps) {
    jj.push_back(json{{"label", op.label},
                      {"site", op.site},
                      {"coefficient", op.coefficient},
                      {"raising", op.raising}});
  }
  rep["jump_operators"] = std::move(jj);
  json bb = json::array();
  for (const auto& b : cfg.model.baths) {
    bb.push_back(json{{"site", b.site},
                      {"beta", finite_or_string(b.beta)},
                      {"beta0", b.beta0},
                      {"beta1", b.beta1}});
  }
  rep["baths"] = std::move(bb);
  rep["wall_time_s"] = timer.seconds();
  emit(rep.dump(2) + "\n", out_path);
  return 0;
}

int cmd_stationary(const Config& cfg, const std::string& out_path) {
  Timer timer;
  reject_unknown_keys(cfg.analysis, {"compute_gap"}, "analysis (stationary)");
  StationaryOptions opts;
  if (cfg.analysis.contains("compute_gap")) {
    if (!cfg.analysis["compute_gap"].is_boolean()) {
      throw std::invalid_argument("config: compute_gap must be a boolean");
    }
    opts.compute_gap = cfg.analysis["compute_gap"].get<bool>();
  }
  const auto rep = stationary_state(cfg.model, opts);

  json out = report_envelope("stationary", cfg, timer);
  out["kernel_dimension"] = rep.kernel_dimension;
  out["residual"] = finite_or_string(rep.residual);
  out["min_eigenvalue"] = finite_or_string(rep.min_eigenvalue);
  out["faithful"] = rep.faithful;
  out["gap"] = finite_or_string(rep.gap);
  if (rep.kernel_dimension == 1) {
    out["state"] = matrix_json(rep.state);
  } else {
    json basis = json::array();
    for (const auto& b : rep.kernel_basis) basis.push_back(matrix_json(b));
    out["kernel_basis"] = std::move(basis);
  }
  out["wall_time_s"] = timer.seconds();
  emit(out.dump(2) + "\n", out_path);
  return 0;
}

Matrix initial_state_from_analysis(const Config& cfg, std::uint64_t seed) {
  const long d = chain_dim(cfg.model.chain.n_sites);
  std::string kind = "maximally-mixed";
  if (cfg.analysis.contains("initial_state")) {
    if (!cfg.analysis["initial_state"].is_string()) {
      throw std::invalid_argument("config: initial_state must be a string");
    }
    kind = cfg.analysis["initial_state"].get<std::string>();
  }
  if (kind == "maximally-mixed") {
    return Matrix::Identity(d, d) / static_cast<double>(d);
  }
  if (kind == "random") {
    SplitMix64 rng(seed);
    return random_density(d, rng);
  }
  if (kind == "all-up") {
    Matrix m = Matrix::Zero(d, d);
    m(0, 0) = 1.0;
    return m;
  }
  if (kind == "product-gibbs") {
    if (!cfg.analysis.contains("initial_beta") || !cfg.analysis["initial_beta"].is_number()) {
      throw std::invalid_argument("config: product-gibbs initial state needs a numeric initial_beta");
    }
    return product_gibbs(cfg.analysis["initial_beta"].get<double>(), cfg.model.chain.n_sites);
  }
  throw std::invalid_argument("config: unknown initial_state \"" + kind + "\"");
}

int cmd_evolve(const Config& cfg, const std::string& out_path, std::uint64_t seed, double tolerance) {
  Timer timer;
  reject_unknown_keys(cfg.analysis, {"t_max", "n_steps", "method", "initial_state", "initial_beta"},
                      "analysis (evolve)");
  double t_max = 5.0;
  if (cfg.analysis.contains("t_max")) {
    if (!cfg.analysis["t_max"].is_number()) {
      throw std::invalid_argument("config: t_max must be a number");
    }
    t_max = cfg.analysis["t_max"].get<double>();
  }
  if (!(t_max > 0) || !std::isfinite(t_max)) {
    throw std::invalid_argument("config: t_max must be finite and > 0");
  }
  int n_steps = 50;
  if (cfg.analysis.contains("n_steps")) {
    if (!cfg.analysis["n_steps"].is_number_integer()) {
      throw std::invalid_argument("config: n_steps must be an integer");
    }
    n_steps = cfg.analysis["n_steps"].get<int>();
  }
  if (n_steps < 1 || n_steps > 100000) {
    throw std::invalid_argument("config: n_steps must be in [1, 100000]");
  }
  EvolveOptions opts;
  opts.tol = tolerance;
  opts.method = cfg.model.chain.n_sites <= 5 ? EvolveMethod::expm : EvolveMethod::adaptive_rk;
  if (cfg.analysis.contains("method")) {
    const auto m = cfg.analysis["method"].get<std::string>();
    if (m == "expm") {
      opts.method = EvolveMethod::expm;
    } else if (m == "rk") {
      opts.method = EvolveMethod::adaptive_rk;
    } else {
      throw std::invalid_argument("config: method must be \"expm\" or \"rk\"");
    }
  }

  const auto stat = require_unique_stationary(cfg.model);
  Matrix rho = initial_state_from_analysis(cfg, seed);
  const double dt = t_max / n_steps;

  std::optional<Matrix> step;
  if (opts.method == EvolveMethod::expm) {
    step = propagator(cfg.model, dt);
  }

  std::ostringstream csv;
  csv << "# command: evolve\n";
  csv << "# config_digest: " << cfg.digest << "\n";
  csv << "t,trace_distance,relative_entropy,min_eigenvalue,trace_drift\n";
  for (int i = 0; i <= n_steps; ++i) {
    const double t = dt * i;
    if (i > 0) {
      if (step) {
        rho = apply_propagator(*step, rho).state;
      } else {
        rho = evolve(cfg.model, rho, dt, opts).state;
      }
    }
    const double dist = trace_distance(rho, stat.state);
    const double rel = relative_entropy(rho, stat.state);
    const double mineig = herm_eig(rho).eigenvalues.minCoeff();
    const double drift = std::abs(rho.trace() - Complex(1, 0));
    csv << format_number(t) << ',' << format_number(dist) << ',' << format_number(rel) << ','
        << format_number(mineig) << ',' << format_number(drift) << "\n";
  }
  csv << "# wall_time_s: " << format_number(timer.seconds()) << "\n";
  emit(csv.str(), out_path);
  return 0;
}

int cmd_entropy(const Config& cfg, const std::string& out_path, std::uint64_t seed) {
  Timer timer;
  reject_unknown_keys(cfg.analysis, {"state"}, "analysis (entropy)");
  std::string kind = "stationary";
  if (cfg.analysis.contains("state")) {
    kind = cfg.analysis["state"].get<std::string>();
  }
  const Matrix rho_ref = reference_state(cfg.model);  // demands one finite temperature

  Matrix rho;
  if (kind == "stationary") {
    rho = require_unique_stationary(cfg.model).state;
  } else if (kind == "reference") {
    rho = rho_ref;
  } else if (kind == "random-faithful") {
    SplitMix64 rng(seed);
    rho = random_faithful_density(chain_dim(cfg.model.chain.n_sites), rng);
  } else {
    throw std::invalid_argument("config: unknown entropy state \"" + kind + "\"");
  }

  const auto def = entropy_production_def(cfg.model, rho, rho_ref);
  json out = report_envelope("entropy", cfg, timer);
  out["state"] = kind;
  auto method_json = [](const EntropyReport& r) {
    json w = json::array();
    for (const auto& s : r.support_warnings) {
      w.push_back(json{{"eigen_index", s.eigen_index}, {"rate", s.rate}});
    }
    json per = json::array();
    for (const double s : r.per_bath) per.push_back(s);
    return json{{"sigma_total", finite_or_string(r.sigma_total)},
                {"per_bath", std::move(per)},
                {"hamiltonian_term", r.hamiltonian_term},
                {"infinite", r.infinite},
                {"support_warnings", std::move(w)}};
  };
  out["definition"] = method_json(def);

  const bool faithful = herm_eig(rho).eigenvalues.minCoeff() > tol::psd_floor;
  if (faithful) {
    const auto closed = entropy_production_closed(cfg.model, rho);
    out["closed_form"] = method_json(closed);
    out["agreement"] = std::abs(def.sigma_total - closed.sigma_total);
  } else {
    out["closed_form"] = nullptr;
    out["agreement"] = nullptr;
  }
  out["wall_time_s"] = timer.seconds();
  emit(out.dump(2) + "\n", out_path);
  return 0;
}

int cmd_detailed_balance(const Config& cfg, const std::string& out_path, std::uint64_t seed) {
  Timer timer;
  reject_unknown_keys(cfg.analysis, {"state"}, "analysis (detailed-balance)");
  std::string kind = "reference";
  if (cfg.analysis.contains("state")) {
    kind = cfg.analysis["state"].get<std::string>();
  }
  Matrix rho;
  if (kind == "reference") {
    rho = reference_state(cfg.model);
  } else if (kind == "stationary") {
    const auto stat = require_unique_stationary(cfg.model);
    if (!stat.faithful) {
      throw contract_violation("detailed-balance: stationary state is not faithful");
    }
    rho = stat.state;
  } else {
    throw std::invalid_argument("config: unknown detailed-balance state \"" + kind + "\"");
  }
  const auto rep = detailed_balance_certificate(cfg.model, rho, seed);

  json out = report_envelope("detailed-balance", cfg, timer);
  out["state"] = kind;
  out["commutation_residual"] = rep.commutation_residual;
  out["symmetry_residual"] = rep.symmetry_residual;
  out["pairs_checked"] = rep.pairs_checked;
  out["exhaustive"] = rep.exhaustive;
  out["satisfied"] = rep.satisfied;
  out["wall_time_s"] = timer.seconds();
  emit(out.dump(2) + "\n", out_path);
  return 0;
}

int cmd_local_states(const Config& cfg, const std::string& out_path) {
  Timer timer;
  reject_unknown_keys(cfg.analysis, {}, "analysis (local-states)");
  const int n = cfg.model.chain.n_sites;
  if (n < 2) {
    throw std::invalid_argument("local-states: needs n_sites >= 2");
  }
  const auto stat = require_unique_stationary(cfg.model);

  // Formula comparison applies to the standard two-ended chain.
  bool standard = cfg.model.chain.b_field == 1.0 && cfg.model.chain.jx == 1.0 &&
                  cfg.model.chain.jy == 1.0 && cfg.model.baths.size() == 2;
  double beta = 0.0, beta_prime = 0.0;
  if (standard) {
    bool left = false, right = false;
    for (const auto& b : cfg.model.baths) {
      if (b.site == 1) { beta = b.beta; left = true; }
      if (b.site == n) { beta_prime = b.beta; right = true; }
    }
    standard = left && right;
  }

  json out = report_envelope("local-states", cfg, timer);
  out["formula_comparison"] = standard;
  json sites = json::array();
  double max_dev = 0.0;
  for (int k = 1; k <= n; ++k) {
    const Matrix loc = local_state(stat.state, k, n);
    json entry{{"site", k}, {"state", matrix_json(loc)}};
    if (standard) {
      const Matrix formula = conjectured_local_state(beta, beta_prime, k, n);
      const double dev = max_abs(loc - formula);
      entry["formula"] = matrix_json(formula);
      entry["deviation"] = dev;
      max_dev = std::max(max_dev, dev);
    }
    sites.push_back(std::move(entry));
  }
  out["sites"] = std::move(sites);
  if (standard) {
    out["max_deviation"] = max_dev;
    const Matrix sum_ends =
        local_state(stat.state, 1, n) + local_state(stat.state, n, n);
    const Matrix expected = gibbs_qubit(beta) + gibbs_qubit(beta_prime);
    out["endpoint_identity_residual"] = max_abs(sum_ends - expected);
  }
  out["wall_time_s"] = timer.seconds();
  emit(out.dump(2) + "\n", out_path);
  return 0;
}

int cmd_rqi_converge(const Config& cfg, const std::string& out_path) {
  Timer timer;
  reject_unknown_keys(cfg.analysis, {"h_grid", "observable"}, "analysis (rqi-converge)");
  std::vector<double> grid{1e-1, 1e-2, 1e-3, 1e-4};
  if (cfg.analysis.contains("h_grid")) {
    if (!cfg.analysis["h_grid"].is_array() || cfg.analysis["h_grid"].empty()) {
      throw std::invalid_argument("config: h_grid must be a non-empty array");
    }
    grid.clear();
    for (const auto& v : cfg.analysis["h_grid"]) {
      if (!v.is_number()) throw std::invalid_argument("config: h_grid entries must be numbers");
      grid.push_back(v.get<double>());
    }
    for (std::size_t i = 1; i < grid.size(); ++i) {
      if (!(grid[i] < grid[i - 1])) {
        throw std::invalid_argument("config: h_grid must be strictly decreasing");
      }
    }
  }
  const int n = cfg.model.chain.n_sites;
  std::string obs_name = "n-plus-1";
  if (cfg.analysis.contains("observable")) {
    obs_name = cfg.analysis["observable"].get<std::string>();
  }
  Matrix obs;
  if (obs_name == "n-plus-1") {
    obs = embed_site(n_plus(), 1, n);
  } else if (obs_name == "sigma-z-1") {
    obs = embed_site(sigma_z(), 1, n);
  } else if (obs_name == "sigma-x-1-2") {
    if (n < 2) throw std::invalid_argument("config: sigma-x-1-2 needs n_sites >= 2");
    obs = embed_site(sigma_x(), 1, n) * embed_site(sigma_x(), 2, n);
  } else {
    throw std::invalid_argument("config: unknown observable \"" + obs_name + "\"");
  }

  const auto points = convergence_probe(cfg.model, obs, grid);
  const double norm_l =
      max_abs(apply_generator(cfg.model, obs, Picture::heisenberg));

  json out = report_envelope("rqi-converge", cfg, timer);
  out["observable"] = obs_name;
  out["generator_norm"] = norm_l;
  json pts = json::array();
  bool decreasing = true;
  for (std::size_t i = 0; i < points.size(); ++i) {
    pts.push_back(json{{"h", points[i].h},
                       {"residual", points[i].residual},
                       {"isometry_residual", points[i].isometry_residual}});
    if (i > 0 && !(points[i].residual < points[i - 1].residual)) decreasing = false;
  }
  out["points"] = std::move(pts);
  out["strictly_decreasing"] = decreasing;
  if (points.size() >= 2) {
    out["order"] = probe_order(points);
  }
  const double endpoint_ratio = points.back().residual / std::max(norm_l, 1e-300);
  out["endpoint_ratio"] = endpoint_ratio;
  out["wall_time_s"] = timer.seconds();
  emit(out.dump(2) + "\n", out_path);

  if (!decreasing) {
    throw contract_violation("rqi-converge: residuals are not strictly decreasing");
  }
  if (endpoint_ratio > 1e-2) {
    throw contract_violation("rqi-converge: endpoint residual exceeds 1e-2 of the generator norm");
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Lindblad dynamics of an XY spin chain coupled to local heat baths"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_path;
  std::uint64_t seed = 1;
  double tolerance = 1e-9;

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--config", config_path, "JSON model configuration")->required();
    cmd->add_option("--out", out_path, "Output path (stdout when omitted)");
    cmd->add_option("--seed", seed, "Seed for sampled states and pair subsets");
    cmd->add_option("--tol", tolerance, "Integration tolerance");
  };

  auto* c_build = app.add_subcommand("build", "Assemble the model and report its pieces");
  auto* c_evolve = app.add_subcommand("evolve", "Time evolution CSV against the stationary state");
  auto* c_stationary = app.add_subcommand("stationary", "Stationary state via kernel extraction");
  auto* c_entropy = app.add_subcommand("entropy", "Entropy production, definition and closed form");
  auto* c_db = app.add_subcommand("detailed-balance", "Quantum detailed balance certificate");
  auto* c_local = app.add_subcommand("local-states", "Per-site reduced stationary states");
  auto* c_rqi = app.add_subcommand("rqi-converge", "Repeated-interaction convergence table");
  for (auto* c : {c_build, c_evolve, c_stationary, c_entropy, c_db, c_local, c_rqi}) {
    add_common(c);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    const Config cfg = load_config(config_path);
    if (c_build->parsed()) return cmd_build(cfg, out_path);
    if (c_evolve->parsed()) return cmd_evolve(cfg, out_path, seed, tolerance);
    if (c_stationary->parsed()) return cmd_stationary(cfg, out_path);
    if (c_entropy->parsed()) return cmd_entropy(cfg, out_path, seed);
    if (c_db->parsed()) return cmd_detailed_balance(cfg, out_path, seed);
    if (c_local->parsed()) return cmd_local_states(cfg, out_path);
    if (c_rqi->parsed()) return cmd_rqi_converge(cfg, out_path);
    std::cerr << "error: no command\n";
    return 1;
  } catch (const contract_violation& e) {
    std::cerr << "numerical contract violation: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::out_of_range& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 3;
  }
}
