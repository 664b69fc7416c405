// Command-line front end: denoising solves, graph generation, rate
// experiments, prox tables, and manifest-driven reruns.  Every run writes a
// manifest.json recording the resolved configuration and digests of all
// inputs and outputs; `rerun` re-executes a manifest and verifies the fresh
// outputs digest-identical.

#include <cstdlib>
#include <ctime>
#include <chrono>
#include <filesystem>
#include <iostream>
#include <stdexcept>
#include <string>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include <CLI11.hpp>
#include <json.hpp>

#include "nlplap/consistency.hpp"
#include "nlplap/graph.hpp"
#include "nlplap/graphon.hpp"
#include "nlplap/io.hpp"
#include "nlplap/operators.hpp"
#include "nlplap/prox.hpp"
#include "nlplap/rng.hpp"
#include "nlplap/solver.hpp"
#include "nlplap/version.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using nlohmann::ordered_json;
using namespace nlplap;

namespace {

std::string join(const std::string& dir, const std::string& name) {
  return (fs::path(dir) / name).string();
}

std::string timestamp_utc() {
  const std::time_t t =
      std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

void write_manifest(const std::string& out_dir, const std::string& command,
                    const ordered_json& config, const std::vector<std::string>& inputs,
                    const std::vector<std::string>& outputs) {
  ordered_json m;
  m["schema_version"] = 1;
  m["command"] = command;
  m["version"] = kVersion;
  m["rng"] = kRngName;
  m["timestamp"] = timestamp_utc();
  m["config"] = config;
  ordered_json in = ordered_json::object();
  for (const auto& p : inputs) in[p] = file_digest_hex(p);
  m["inputs"] = in;
  ordered_json out = ordered_json::object();
  for (const auto& name : outputs) out[name] = file_digest_hex(join(out_dir, name));
  m["outputs"] = out;
  write_file_atomic(join(out_dir, "manifest.json"), m.dump(2) + "\n");
}

RandomGraphConfig::NodeMode parse_nodes(const std::string& s) {
  if (s == "equispaced") return RandomGraphConfig::NodeMode::Equispaced;
  if (s == "order-stats") return RandomGraphConfig::NodeMode::UniformOrderStats;
  throw std::invalid_argument("unknown node mode '" + s + "'");
}

// ---------------------------------------------------------------------------
// denoise

struct DenoiseParams {
  std::string kernel = "kind=band,delta=0.3";
  std::string signal = "steps5";
  int n = 200;
  double p = 2.0;
  double lambda = 1.0;
  double sigma = 0.0;
  std::uint64_t seed = 1;
  std::string mode = "weighted";  // weighted | simple | random
  double q_n = 1.0;
  std::string nodes = "equispaced";  // equispaced | order-stats
  double gamma = 0.0;
  double b = 3.0;
  int max_iter = 5000;
  double tol = 1e-9;
  bool history = false;
  std::string graph_json;
  std::string graph_csv;
  std::string signal_csv;
};

ordered_json denoise_to_json(const DenoiseParams& P) {
  ordered_json j;
  j["kernel"] = P.kernel;
  j["signal"] = P.signal;
  j["n"] = P.n;
  j["p"] = P.p;
  j["lambda"] = P.lambda;
  j["sigma"] = P.sigma;
  j["seed"] = P.seed;
  j["mode"] = P.mode;
  j["q_n"] = P.q_n;
  j["nodes"] = P.nodes;
  j["gamma"] = P.gamma;
  j["b"] = P.b;
  j["max_iter"] = P.max_iter;
  j["tol"] = P.tol;
  j["history"] = P.history;
  j["graph_json"] = P.graph_json;
  j["graph_csv"] = P.graph_csv;
  j["signal_csv"] = P.signal_csv;
  return j;
}

DenoiseParams denoise_from_json(const json& j) {
  DenoiseParams P;
  P.kernel = j.at("kernel").get<std::string>();
  P.signal = j.at("signal").get<std::string>();
  P.n = j.at("n").get<int>();
  P.p = j.at("p").get<double>();
  P.lambda = j.at("lambda").get<double>();
  P.sigma = j.at("sigma").get<double>();
  P.seed = j.at("seed").get<std::uint64_t>();
  P.mode = j.at("mode").get<std::string>();
  P.q_n = j.at("q_n").get<double>();
  P.nodes = j.at("nodes").get<std::string>();
  P.gamma = j.at("gamma").get<double>();
  P.b = j.at("b").get<double>();
  P.max_iter = j.at("max_iter").get<int>();
  P.tol = j.at("tol").get<double>();
  P.history = j.at("history").get<bool>();
  P.graph_json = j.at("graph_json").get<std::string>();
  P.graph_csv = j.at("graph_csv").get<std::string>();
  P.signal_csv = j.at("signal_csv").get<std::string>();
  return P;
}

std::pair<WeightedGraph, Partition> build_graph(const std::string& kernel_spec, int n,
                                                const std::string& mode, double q_n,
                                                const std::string& nodes,
                                                std::uint64_t seed) {
  if (n < 2) throw std::invalid_argument("graph size must be at least 2");
  const Graphon K = parse_kernel_spec(kernel_spec);
  if (mode == "weighted") {
    return {deterministic_weighted(K, n), Partition::equispaced(n)};
  }
  if (mode == "simple") {
    return {simple_graph(K, n), Partition::equispaced(n)};
  }
  if (mode == "random") {
    RandomGraphConfig rc;
    rc.n = n;
    rc.q_n = q_n;
    rc.seed = derive_stream(seed, "graph");
    rc.node_mode = parse_nodes(nodes);
    Partition part = sample_nodes(rc);
    return {sample_inhomogeneous(K, rc), std::move(part)};
  }
  throw std::invalid_argument("unknown graph mode '" + mode + "'");
}

std::vector<std::string> run_denoise(const DenoiseParams& P, const std::string& out_dir,
                                     std::vector<std::string>& inputs) {
  WeightedGraph G;
  Partition part;
  if (!P.graph_json.empty() || !P.graph_csv.empty()) {
    if (P.graph_json.empty() || P.graph_csv.empty()) {
      throw std::invalid_argument("--graph-json and --graph-csv must be given together");
    }
    G = read_graph(P.graph_json, P.graph_csv);
    part = Partition::equispaced(G.n);
    inputs.push_back(P.graph_json);
    inputs.push_back(P.graph_csv);
  } else {
    auto gp = build_graph(P.kernel, P.n, P.mode, P.q_n, P.nodes, P.seed);
    G = std::move(gp.first);
    part = std::move(gp.second);
  }
  const int n = G.n;

  std::vector<double> clean, g;
  bool have_clean = false;
  if (!P.signal_csv.empty()) {
    g = read_signal_csv(P.signal_csv);
    if (static_cast<int>(g.size()) != n) {
      throw std::invalid_argument("signal file has " + std::to_string(g.size()) +
                                  " entries but the graph has " + std::to_string(n) +
                                  " nodes");
    }
    inputs.push_back(P.signal_csv);
  } else {
    clean = project_signal(parse_signal_spec(P.signal), part);
    g = clean;
    if (P.sigma > 0.0) {
      SplitMix64 rng(derive_stream(P.seed, "noise"));
      for (double& x : g) x += P.sigma * rng.normal();
    }
    have_clean = true;
  }

  SolverConfig sc;
  sc.p = P.p;
  sc.lambda = P.lambda;
  sc.gamma = P.gamma;
  sc.b = P.b;
  sc.max_iter = P.max_iter;
  sc.tol = P.tol;
  sc.record_history = P.history;
  const SolveResult res = solve(G, g, sc);

  std::vector<std::string> outs;
  write_signal_csv(join(out_dir, "g.csv"), g);
  outs.push_back("g.csv");
  if (have_clean) {
    write_signal_csv(join(out_dir, "clean.csv"), clean);
    outs.push_back("clean.csv");
  }
  write_signal_csv(join(out_dir, "u.csv"), res.u_star);
  outs.push_back("u.csv");
  write_pwc_csv(join(out_dir, "u_pwc.csv"), inject(res.u_star, part));
  outs.push_back("u_pwc.csv");
  if (P.history) {
    std::string h = "iter,step_change,energy\n";
    for (std::size_t k = 0; k < res.primal_history.size(); ++k) {
      h += std::to_string(k + 1);
      h += ',';
      h += format_double(res.primal_history[k]);
      h += ',';
      h += format_double(res.energy_history[k]);
      h += '\n';
    }
    write_file_atomic(join(out_dir, "history.csv"), h);
    outs.push_back("history.csv");
  }

  const EnergyBreakdown eb = energy_total(G, res.u_star, g, P.lambda, P.p);
  ordered_json s;
  s["n"] = n;
  s["p"] = P.p;
  s["lambda"] = P.lambda;
  s["iterations"] = res.iterations;
  s["final_residual"] = res.final_residual;
  s["gamma_used"] = res.gamma_used;
  s["energy"] = {{"fidelity", eb.fidelity}, {"regularizer", eb.regularizer}, {"total", eb.total}};
  s["edge_count"] = G.edge_count();
  s["max_weight"] = G.max_weight();
  write_file_atomic(join(out_dir, "summary.json"), s.dump(2) + "\n");
  outs.push_back("summary.json");
  return outs;
}

// ---------------------------------------------------------------------------
// graph-gen

struct GraphGenParams {
  std::string kernel = "kind=band,delta=0.3";
  int n = 200;
  std::string mode = "weighted";  // weighted | simple | random | coords
  double q_n = 1.0;
  std::string nodes = "equispaced";
  std::uint64_t seed = 1;
  std::string coords_csv;
  double delta = 0.1;  // coords mode: connection radius
};

ordered_json graph_gen_to_json(const GraphGenParams& P) {
  ordered_json j;
  j["kernel"] = P.kernel;
  j["n"] = P.n;
  j["mode"] = P.mode;
  j["q_n"] = P.q_n;
  j["nodes"] = P.nodes;
  j["seed"] = P.seed;
  j["coords_csv"] = P.coords_csv;
  j["delta"] = P.delta;
  return j;
}

GraphGenParams graph_gen_from_json(const json& j) {
  GraphGenParams P;
  P.kernel = j.at("kernel").get<std::string>();
  P.n = j.at("n").get<int>();
  P.mode = j.at("mode").get<std::string>();
  P.q_n = j.at("q_n").get<double>();
  P.nodes = j.at("nodes").get<std::string>();
  P.seed = j.at("seed").get<std::uint64_t>();
  P.coords_csv = j.at("coords_csv").get<std::string>();
  P.delta = j.at("delta").get<double>();
  return P;
}

std::vector<std::string> run_graph_gen(const GraphGenParams& P, const std::string& out_dir,
                                       std::vector<std::string>& inputs) {
  WeightedGraph G;
  Partition part;
  bool have_part = false;
  if (P.mode == "coords") {
    if (P.coords_csv.empty()) {
      throw std::invalid_argument("mode 'coords' requires --coords");
    }
    const PointCloud pc = read_coords_csv(P.coords_csv);
    inputs.push_back(P.coords_csv);
    G = coordinate_graph(pc.pts, P.delta);
  } else {
    auto gp = build_graph(P.kernel, P.n, P.mode, P.q_n, P.nodes, P.seed);
    G = std::move(gp.first);
    part = std::move(gp.second);
    have_part = true;
  }
  write_graph(G, join(out_dir, "graph.json"), join(out_dir, "graph.csv"));
  std::vector<std::string> outs = {"graph.json", "graph.csv"};
  if (have_part && P.mode == "random") {
    std::vector<double> left(part.x.begin(), part.x.end() - 1);
    write_signal_csv(join(out_dir, "nodes.csv"), left);
    outs.push_back("nodes.csv");
  }
  return outs;
}

// ---------------------------------------------------------------------------
// rates

struct RatesParams {
  int ref_n = 1000;
  std::vector<int> n_grid = {100, 125, 160, 200, 250};
  int reps = 20;
  double lambda = -1.0;
  double p = 1.0;
  std::string kernel = "kind=band,delta=0.3";
  std::string signal = "steps5";
  double sigma = 0.5;
  std::string mode = "weighted";  // weighted | simple | random
  double q_n = 1.0;
  std::uint64_t seed = 1;
  double solver_tol = 1e-7;
  int solver_max_iter = 4000;
  double ref_tol = 1e-11;
  int ref_max_iter = 20000;
};

ordered_json rates_to_json(const RatesParams& P) {
  ordered_json j;
  j["ref_n"] = P.ref_n;
  j["n_grid"] = P.n_grid;
  j["reps"] = P.reps;
  j["lambda"] = P.lambda;
  j["p"] = P.p;
  j["kernel"] = P.kernel;
  j["signal"] = P.signal;
  j["sigma"] = P.sigma;
  j["mode"] = P.mode;
  j["q_n"] = P.q_n;
  j["seed"] = P.seed;
  j["solver_tol"] = P.solver_tol;
  j["solver_max_iter"] = P.solver_max_iter;
  j["ref_tol"] = P.ref_tol;
  j["ref_max_iter"] = P.ref_max_iter;
  return j;
}

RatesParams rates_from_json(const json& j) {
  RatesParams P;
  P.ref_n = j.at("ref_n").get<int>();
  P.n_grid = j.at("n_grid").get<std::vector<int>>();
  P.reps = j.at("reps").get<int>();
  P.lambda = j.at("lambda").get<double>();
  P.p = j.at("p").get<double>();
  P.kernel = j.at("kernel").get<std::string>();
  P.signal = j.at("signal").get<std::string>();
  P.sigma = j.at("sigma").get<double>();
  P.mode = j.at("mode").get<std::string>();
  P.q_n = j.at("q_n").get<double>();
  P.seed = j.at("seed").get<std::uint64_t>();
  P.solver_tol = j.at("solver_tol").get<double>();
  P.solver_max_iter = j.at("solver_max_iter").get<int>();
  P.ref_tol = j.at("ref_tol").get<double>();
  P.ref_max_iter = j.at("ref_max_iter").get<int>();
  return P;
}

ExperimentConfig::GraphMode parse_graph_mode(const std::string& s) {
  if (s == "weighted") return ExperimentConfig::GraphMode::DeterministicWeighted;
  if (s == "simple") return ExperimentConfig::GraphMode::Simple;
  if (s == "random") return ExperimentConfig::GraphMode::Random;
  throw std::invalid_argument("unknown graph mode '" + s + "'");
}

std::vector<std::string> run_rates(const RatesParams& P, const std::string& out_dir,
                                   std::vector<std::string>&) {
  ExperimentConfig cfg;
  cfg.N = P.ref_n;
  cfg.n_grid = P.n_grid;
  cfg.replications = P.reps;
  cfg.lambda = P.lambda;
  cfg.p = P.p;
  cfg.kernel = P.kernel;
  cfg.signal = P.signal;
  cfg.noise_sigma = P.sigma;
  cfg.graph_mode = parse_graph_mode(P.mode);
  cfg.q_n = P.q_n;
  cfg.seed = P.seed;
  cfg.solver_tol = P.solver_tol;
  cfg.solver_max_iter = P.solver_max_iter;
  cfg.reference_tol = P.ref_tol;
  cfg.reference_max_iter = P.ref_max_iter;
  const RateReport rep = run_experiment(cfg);

  std::string csv = "n,mean_sq,std_dev,std_mean\n";
  for (std::size_t i = 0; i < rep.ns.size(); ++i) {
    csv += std::to_string(rep.ns[i]);
    csv += ',';
    csv += format_double(rep.mean_sq[i]);
    csv += ',';
    csv += format_double(rep.std_dev[i]);
    csv += ',';
    csv += format_double(rep.std_mean[i]);
    csv += '\n';
  }
  write_file_atomic(join(out_dir, "errors.csv"), csv);

  ordered_json r;
  r["config"] = rates_to_json(P);
  r["lambda_used"] = rep.lambda_used;
  r["slope"] = rep.slope;
  r["intercept"] = rep.intercept;
  r["half_width"] = rep.half_width;
  r["theory_exponent"] = rep.theory_exponent;
  r["verdict"] = rep.verdict;
  r["reference"] = {{"iterations", rep.reference_iterations},
                    {"final_residual", rep.reference_residual}};
  r["n"] = rep.ns;
  r["mean_sq"] = rep.mean_sq;
  r["std_dev"] = rep.std_dev;
  r["std_mean"] = rep.std_mean;
  write_file_atomic(join(out_dir, "report.json"), r.dump(2) + "\n");
  return {"errors.csv", "report.json"};
}

// ---------------------------------------------------------------------------
// prox-table

struct ProxTableParams {
  double p = 2.0;
  double gamma = 0.5;
  double lambda_n = 1.0;
  double t_min = -2.0;
  double t_max = 2.0;
  int count = 81;
};

ordered_json prox_table_to_json(const ProxTableParams& P) {
  ordered_json j;
  j["p"] = P.p;
  j["gamma"] = P.gamma;
  j["lambda_n"] = P.lambda_n;
  j["t_min"] = P.t_min;
  j["t_max"] = P.t_max;
  j["count"] = P.count;
  return j;
}

ProxTableParams prox_table_from_json(const json& j) {
  ProxTableParams P;
  P.p = j.at("p").get<double>();
  P.gamma = j.at("gamma").get<double>();
  P.lambda_n = j.at("lambda_n").get<double>();
  P.t_min = j.at("t_min").get<double>();
  P.t_max = j.at("t_max").get<double>();
  P.count = j.at("count").get<int>();
  return P;
}

std::vector<std::string> run_prox_table(const ProxTableParams& P, const std::string& out_dir,
                                        std::vector<std::string>&) {
  if (P.count < 2) throw std::invalid_argument("--count must be at least 2");
  if (!(P.t_max > P.t_min)) throw std::invalid_argument("--t-max must exceed --t-min");
  ProxParams pp{dual_exponent(P.p), P.gamma, P.lambda_n};
  std::string csv = "t,value\n";
  for (int k = 0; k < P.count; ++k) {
    const double t = P.t_min + (P.t_max - P.t_min) * k / (P.count - 1);
    csv += format_double(t);
    csv += ',';
    csv += format_double(prox_scalar(t, pp));
    csv += '\n';
  }
  write_file_atomic(join(out_dir, "prox.csv"), csv);
  return {"prox.csv"};
}

// ---------------------------------------------------------------------------
// rerun

int run_from_manifest(const std::string& manifest_path, const std::string& out_dir) {
  json m;
  try {
    m = json::parse(read_file(manifest_path));
  } catch (const json::parse_error& e) {
    throw std::invalid_argument("'" + manifest_path + "' is not valid JSON: " +
                                std::string(e.what()));
  }
  if (m.at("schema_version").get<int>() != 1) {
    throw std::invalid_argument("unsupported manifest schema_version");
  }
  const std::string command = m.at("command").get<std::string>();
  const json& config = m.at("config");

  for (const auto& [path, digest] : m.at("inputs").items()) {
    const std::string fresh = file_digest_hex(path);
    if (fresh != digest.get<std::string>()) {
      throw std::invalid_argument("input '" + path +
                                  "' changed since the manifest was written");
    }
  }

  std::vector<std::string> inputs;
  std::vector<std::string> outs;
  ordered_json cfg_echo;
  if (command == "denoise") {
    const DenoiseParams P = denoise_from_json(config);
    cfg_echo = denoise_to_json(P);
    outs = run_denoise(P, out_dir, inputs);
  } else if (command == "graph-gen") {
    const GraphGenParams P = graph_gen_from_json(config);
    cfg_echo = graph_gen_to_json(P);
    outs = run_graph_gen(P, out_dir, inputs);
  } else if (command == "rates") {
    const RatesParams P = rates_from_json(config);
    cfg_echo = rates_to_json(P);
    outs = run_rates(P, out_dir, inputs);
  } else if (command == "prox-table") {
    const ProxTableParams P = prox_table_from_json(config);
    cfg_echo = prox_table_to_json(P);
    outs = run_prox_table(P, out_dir, inputs);
  } else {
    throw std::invalid_argument("manifest names unknown command '" + command + "'");
  }
  write_manifest(out_dir, command, cfg_echo, inputs, outs);

  int mismatches = 0;
  for (const auto& [name, digest] : m.at("outputs").items()) {
    const std::string fresh = file_digest_hex(join(out_dir, name));
    const bool ok = fresh == digest.get<std::string>();
    std::cout << name << ": " << (ok ? "identical" : "DIFFERS") << "\n";
    if (!ok) ++mismatches;
  }
  if (mismatches == 0) {
    std::cout << "reproduction OK (" << m.at("outputs").size() << " files)\n";
    return 0;
  }
  std::cout << "reproduction FAILED (" << mismatches << " files differ)\n";
  return 1;
}

}  // namespace

int main(int argc, char** argv) {
#ifdef _OPENMP
  if (const char* tv = std::getenv("NLPLAP_THREADS")) {
    const int t = std::atoi(tv);
    if (t > 0) omp_set_num_threads(t);
  }
#endif

  CLI::App app{"Nonlocal p-Laplacian denoising on dense weighted graphs"};
  app.set_version_flag("--version", std::string(kVersion));
  app.require_subcommand(1);

  DenoiseParams dn;
  std::string dn_out;
  CLI::App* cdn = app.add_subcommand("denoise", "Solve the denoising problem on a graph");
  cdn->add_option("--out", dn_out, "Output directory")->required();
  cdn->add_option("--kernel", dn.kernel, "Kernel spec, e.g. kind=band,delta=0.3")
      ->capture_default_str();
  cdn->add_option("--signal", dn.signal, "Signal spec or preset name")->capture_default_str();
  cdn->add_option("--n", dn.n, "Number of nodes")->capture_default_str();
  cdn->add_option("--p", dn.p, "Regularizer exponent (>= 1)")->capture_default_str();
  cdn->add_option("--lambda", dn.lambda, "Fidelity weight (> 0)")->capture_default_str();
  cdn->add_option("--sigma", dn.sigma, "Gaussian noise level added to the clean signal")
      ->capture_default_str();
  cdn->add_option("--seed", dn.seed, "Base seed")->capture_default_str();
  cdn->add_option("--mode", dn.mode, "Graph construction")
      ->check(CLI::IsMember({"weighted", "simple", "random"}))
      ->capture_default_str();
  cdn->add_option("--q", dn.q_n, "Sparsification parameter for random graphs")
      ->capture_default_str();
  cdn->add_option("--nodes", dn.nodes, "Node placement for random graphs")
      ->check(CLI::IsMember({"equispaced", "order-stats"}))
      ->capture_default_str();
  cdn->add_option("--gamma", dn.gamma, "Dual step size (<= 0 selects automatic)")
      ->capture_default_str();
  cdn->add_option("--b", dn.b, "Inertia offset (> 2)")->capture_default_str();
  cdn->add_option("--max-iter", dn.max_iter, "Iteration cap")->capture_default_str();
  cdn->add_option("--tol", dn.tol, "Relative primal-change stopping tolerance")
      ->capture_default_str();
  cdn->add_flag("--history", dn.history, "Also write per-iteration history.csv");
  cdn->add_option("--graph-json", dn.graph_json, "Load the graph header from this file");
  cdn->add_option("--graph-csv", dn.graph_csv, "Load the edge list from this file");
  cdn->add_option("--signal-csv", dn.signal_csv, "Load the noisy signal from this file");
  cdn->set_config("--config");

  GraphGenParams gg;
  std::string gg_out;
  CLI::App* cgg = app.add_subcommand("graph-gen", "Generate a graph and write it to disk");
  cgg->add_option("--out", gg_out, "Output directory")->required();
  cgg->add_option("--kernel", gg.kernel, "Kernel spec")->capture_default_str();
  cgg->add_option("--n", gg.n, "Number of nodes")->capture_default_str();
  cgg->add_option("--mode", gg.mode, "Graph construction")
      ->check(CLI::IsMember({"weighted", "simple", "random", "coords"}))
      ->capture_default_str();
  cgg->add_option("--q", gg.q_n, "Sparsification parameter for random graphs")
      ->capture_default_str();
  cgg->add_option("--nodes", gg.nodes, "Node placement for random graphs")
      ->check(CLI::IsMember({"equispaced", "order-stats"}))
      ->capture_default_str();
  cgg->add_option("--seed", gg.seed, "Base seed")->capture_default_str();
  cgg->add_option("--coords", gg.coords_csv, "Coordinates CSV for mode 'coords'");
  cgg->add_option("--delta", gg.delta, "Connection radius for mode 'coords'")
      ->capture_default_str();
  cgg->set_config("--config");

  RatesParams rt;
  std::string rt_out;
  CLI::App* crt = app.add_subcommand("rates", "Run the discrete-to-continuum rate experiment");
  crt->add_option("--out", rt_out, "Output directory")->required();
  crt->add_option("--ref-n", rt.ref_n, "Reference resolution N")->capture_default_str();
  crt->add_option("--n-grid", rt.n_grid, "Comma-separated list of n values")
      ->delimiter(',')
      ->capture_default_str();
  crt->add_option("--reps", rt.reps, "Replications per n")->capture_default_str();
  crt->add_option("--lambda", rt.lambda, "Fidelity weight (< 0 runs the pilot search)")
      ->capture_default_str();
  crt->add_option("--p", rt.p, "Regularizer exponent")->capture_default_str();
  crt->add_option("--kernel", rt.kernel, "Kernel spec")->capture_default_str();
  crt->add_option("--signal", rt.signal, "Signal spec or preset name")->capture_default_str();
  crt->add_option("--sigma", rt.sigma, "Noise level")->capture_default_str();
  crt->add_option("--mode", rt.mode, "Graph construction for the subsampled solves")
      ->check(CLI::IsMember({"weighted", "simple", "random"}))
      ->capture_default_str();
  crt->add_option("--q", rt.q_n, "Sparsification parameter for random graphs")
      ->capture_default_str();
  crt->add_option("--seed", rt.seed, "Base seed")->capture_default_str();
  crt->add_option("--solver-tol", rt.solver_tol, "Tolerance for the subsampled solves")
      ->capture_default_str();
  crt->add_option("--solver-max-iter", rt.solver_max_iter, "Iteration cap for the subsampled solves")
      ->capture_default_str();
  crt->add_option("--ref-tol", rt.ref_tol, "Tolerance for the reference solve")
      ->capture_default_str();
  crt->add_option("--ref-max-iter", rt.ref_max_iter, "Iteration cap for the reference solve")
      ->capture_default_str();
  crt->set_config("--config");

  ProxTableParams px;
  std::string px_out;
  CLI::App* cpx = app.add_subcommand("prox-table", "Tabulate the scalar dual prox");
  cpx->add_option("--out", px_out, "Output directory")->required();
  cpx->add_option("--p", px.p, "Primal exponent; the dual exponent is derived")
      ->capture_default_str();
  cpx->add_option("--gamma", px.gamma, "Step size")->capture_default_str();
  cpx->add_option("--lambda-n", px.lambda_n, "Scaled regularization weight")
      ->capture_default_str();
  cpx->add_option("--t-min", px.t_min, "Left end of the t grid")->capture_default_str();
  cpx->add_option("--t-max", px.t_max, "Right end of the t grid")->capture_default_str();
  cpx->add_option("--count", px.count, "Grid size")->capture_default_str();

  std::string rr_manifest, rr_out;
  CLI::App* crr = app.add_subcommand("rerun", "Re-execute a manifest and verify outputs");
  crr->add_option("manifest", rr_manifest, "Path to a manifest.json")->required();
  crr->add_option("--out", rr_out, "Output directory for the re-executed run")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    std::vector<std::string> inputs;
    if (cdn->parsed()) {
      const auto outs = run_denoise(dn, dn_out, inputs);
      write_manifest(dn_out, "denoise", denoise_to_json(dn), inputs, outs);
      std::cout << "wrote " << outs.size() + 1 << " files to " << dn_out << "\n";
    } else if (cgg->parsed()) {
      const auto outs = run_graph_gen(gg, gg_out, inputs);
      write_manifest(gg_out, "graph-gen", graph_gen_to_json(gg), inputs, outs);
      std::cout << "wrote " << outs.size() + 1 << " files to " << gg_out << "\n";
    } else if (crt->parsed()) {
      const auto outs = run_rates(rt, rt_out, inputs);
      write_manifest(rt_out, "rates", rates_to_json(rt), inputs, outs);
      std::cout << "wrote " << outs.size() + 1 << " files to " << rt_out << "\n";
    } else if (cpx->parsed()) {
      const auto outs = run_prox_table(px, px_out, inputs);
      write_manifest(px_out, "prox-table", prox_table_to_json(px), inputs, outs);
      std::cout << "wrote " << outs.size() + 1 << " files to " << px_out << "\n";
    } else if (crr->parsed()) {
      return run_from_manifest(rr_manifest, rr_out);
    }
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const json::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::runtime_error& e) {
    const std::string msg = e.what();
    std::cerr << "error: " << msg << "\n";
    return msg.find("diverged") != std::string::npos ? 3 : 1;
  }
  return 0;
}
