// Acceptance gate: one binary, one printed PASS/FAIL line per shipped claim,
// exit code = number of unexpected failures.  Criterion 11 checks a spacing
// tail bound at its advertised threshold; measurements show the violation
// frequency scales one factor of n worse (union over the n spacings), so that
// line is expected to stay red and is excluded from the exit code.  Run with
// integer arguments to execute a subset, e.g. ./nlplap_acceptance 1 2 3.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <set>
#include <string>
#include <sys/wait.h>
#include <vector>

#include <json.hpp>

#include "nlplap/consistency.hpp"
#include "nlplap/graph.hpp"
#include "nlplap/graphon.hpp"
#include "nlplap/io.hpp"
#include "nlplap/operators.hpp"
#include "nlplap/prox.hpp"
#include "nlplap/rng.hpp"
#include "nlplap/solver.hpp"

using namespace nlplap;
namespace fs = std::filesystem;

namespace {

double now_s() {
  using clock = std::chrono::steady_clock;
  return std::chrono::duration<double>(clock::now().time_since_epoch()).count();
}

char detail_buf[4096];

#define DETAIL(...) std::snprintf(detail_buf, sizeof detail_buf, __VA_ARGS__)

WeightedGraph random_graph(int n, std::uint64_t seed, double density = 0.7) {
  WeightedGraph G;
  G.n = n;
  G.w = Matrix(n);
  SplitMix64 rng(seed);
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      const double w = rng.uniform() < density ? rng.uniform() : 0.0;
      G.w(i, j) = w;
      G.w(j, i) = w;
    }
  }
  return G;
}

std::vector<double> random_vec(int n, std::uint64_t seed, double scale = 1.0) {
  std::vector<double> v(n);
  SplitMix64 rng(seed);
  for (double& x : v) x = scale * rng.normal();
  return v;
}

double norm2(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

double dist2(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
  return std::sqrt(s);
}

// --------------------------------------------------------------------------
// 1: adjointness of the discrete gradient and divergence

bool crit_adjointness() {
  const double ps[] = {1.0, 1.3, 2.0, 3.7};
  double worst = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    SplitMix64 pick(trial + 1);
    const int n = 2 + static_cast<int>(pick.uniform() * 49);
    WeightedGraph G = random_graph(n, 100 + trial);
    if (trial % 10 == 0) {
      // Exercise isolated nodes too.
      const int z = trial % n;
      for (int j = 0; j < n; ++j) G.w(z, j) = G.w(j, z) = 0.0;
    }
    const double p = ps[trial % 4];
    const auto u = random_vec(n, 200 + trial);
    Matrix V(n);
    SplitMix64 rng(300 + trial);
    for (double& x : V.a) x = rng.normal();

    const DualField gu = gradient(G, u, p);
    const auto dv = divergence(G, V, p);
    double a = 0.0, b = 0.0;
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) a += gu(i, j) * V(i, j);
      b += u[i] * dv[i];
    }
    worst = std::max(worst, std::fabs(a - b) / std::max(1.0, std::fabs(a)));
  }
  DETAIL("100 instances, n <= 50, p in {1,1.3,2,3.7}; worst relative gap %.2e (tol 1e-10)",
         worst);
  return worst <= 1e-10;
}

// --------------------------------------------------------------------------
// 2: scalar prox against an independent bisection oracle

double prox_oracle(double t, const ProxParams& pp) {
  const double at = std::fabs(t);
  const double q = pp.q;
  double r;
  if (std::isinf(q)) {
    r = std::min(at, pp.lambda_n);
  } else if (q == 1.0) {
    r = std::max(at - pp.gamma, 0.0);
  } else {
    const double c = pp.gamma * std::pow(pp.lambda_n, 1.0 - q);
    double lo = 0.0, hi = at;
    for (int it = 0; it < 200; ++it) {
      const double mid = 0.5 * (lo + hi);
      if (mid - at + c * std::pow(mid, q - 1.0) > 0.0) {
        hi = mid;
      } else {
        lo = mid;
      }
    }
    r = 0.5 * (lo + hi);
  }
  return t < 0.0 ? -r : r;
}

bool crit_prox_oracle() {
  const double inf = std::numeric_limits<double>::infinity();
  const double qs[] = {1.0, 1.2, 1.5, 2.0, 3.0, 4.0, 8.0, inf};
  SplitMix64 rng(777);
  double worst = 0.0;
  for (int trial = 0; trial < 1000; ++trial) {
    const double q = qs[trial % 8];
    const ProxParams pp{q, std::exp(rng.uniform() * 12.0 - 6.0),
                        std::exp(rng.uniform() * 14.0 - 9.0)};
    const double t = (rng.uniform() * 2.0 - 1.0) * std::exp(rng.uniform() * 6.0 - 3.0);
    const double got = prox_scalar(t, pp);
    const double want = prox_oracle(t, pp);
    worst = std::max(worst, std::fabs(got - want) / std::max(1.0, std::fabs(t)));
  }
  // Cubic golden value: gamma = lambda_n = 1, q = 4, t = 1 solves a + a^3 = 1.
  const double cube = prox_scalar(1.0, ProxParams{4.0, 1.0, 1.0});
  const double cube_gap = std::fabs(cube - 0.6823278038280193);
  DETAIL("1000 triples over q in [1, inf]; worst gap %.2e (tol 1e-8); cubic root gap %.2e",
         worst, cube_gap);
  return worst <= 1e-8 && cube_gap <= 1e-8;
}

// --------------------------------------------------------------------------
// 3: accelerated dual solver against the direct quadratic solver

bool crit_p2_against_direct() {
  const double lambdas[] = {0.1, 1.0, 10.0};
  double worst = 0.0;
  int worst_n = 0;
  for (int trial = 0; trial < 50; ++trial) {
    const int n = 2 + (trial * 97) % 199;  // 2 .. 200
    const double lambda = lambdas[trial % 3];
    const WeightedGraph G = random_graph(n, 5000 + trial, 0.6);
    const auto g = random_vec(n, 6000 + trial, 2.0);
    const auto direct = solve_p2_direct(G, g, lambda);
    SolverConfig cfg;
    cfg.p = 2.0;
    cfg.lambda = lambda;
    cfg.tol = 1e-12;
    cfg.max_iter = 60000;
    const auto res = solve(G, g, cfg);
    double dinf = 0.0, uinf = 0.0;
    for (int i = 0; i < n; ++i) {
      dinf = std::max(dinf, std::fabs(res.u_star[i] - direct[i]));
      uinf = std::max(uinf, std::fabs(direct[i]));
    }
    const double rel = dinf / std::max(1.0, uinf);
    if (rel > worst) {
      worst = rel;
      worst_n = n;
    }
  }
  DETAIL("50 instances, n <= 200, lambda in {0.1,1,10}; worst gap %.2e at n=%d (tol 1e-8)",
         worst, worst_n);
  return worst <= 1e-8;
}

// --------------------------------------------------------------------------
// 4: o(1/k) primal iterate decay

bool crit_rate_o1k() {
  const int n = 100;
  const WeightedGraph G = deterministic_weighted(Graphon::band(0.3), n);
  auto g = project_signal(parse_signal_spec("steps5"), Partition::equispaced(n));
  SplitMix64 noise(derive_stream(4, "noise"));
  for (double& x : g) x += 0.5 * noise.normal();

  double ratio_p2 = 0.0, ratio_p1 = 0.0;
  bool ok = true;
  for (double p : {2.0, 1.0}) {
    std::vector<double> ref;
    if (p == 2.0) {
      ref = solve_p2_direct(G, g, 1.0);
    } else {
      SolverConfig tight;
      tight.p = p;
      tight.lambda = 1.0;
      tight.tol = 1e-14;
      tight.max_iter = 80000;
      ref = solve(G, g, tight).u_star;
    }
    SolverConfig cfg;
    cfg.p = p;
    cfg.lambda = 1.0;
    cfg.tol = 0.0;
    cfg.max_iter = 2500;
    cfg.error_reference = &ref;
    const auto res = solve(G, g, cfg);
    const auto rep = convergence_rate_check(res.error_history);
    (p == 2.0 ? ratio_p2 : ratio_p1) = rep.max_tail_ratio;
    ok = ok && rep.tail_ok;
  }
  DETAIL("n=100, 2500 iterations; max tail ratio of k*err: p=2 %.4f, p=1 %.4f (limit 1.10)",
         ratio_p2, ratio_p1);
  return ok;
}

// --------------------------------------------------------------------------
// 5: non-expansiveness of the solution map in the data

bool crit_nonexpansive() {
  const int n = 60;
  const WeightedGraph G = deterministic_weighted(Graphon::band(0.3), n);
  const double ps[] = {1.0, 1.5, 2.0};
  double worst = -1e300;
  for (int trial = 0; trial < 50; ++trial) {
    const double p = ps[trial % 3];
    const auto g1 = random_vec(n, 9000 + trial, 1.5);
    auto g2 = g1;
    SplitMix64 rng(9500 + trial);
    const double scale = 0.01 + 2.0 * rng.uniform();
    for (double& x : g2) x += scale * rng.normal();
    SolverConfig cfg;
    cfg.p = p;
    cfg.lambda = 1.0;
    cfg.tol = 1e-10;
    cfg.max_iter = 30000;
    const auto u1 = solve(G, g1, cfg).u_star;
    const auto u2 = solve(G, g2, cfg).u_star;
    worst = std::max(worst, dist2(u1, u2) - dist2(g1, g2));
  }
  DETAIL("50 pairs, p in {1,1.5,2}; worst ||u1-u2|| - ||g1-g2|| = %.2e (slack 1e-6)", worst);
  return worst <= 1e-6;
}

// --------------------------------------------------------------------------
// 6: a priori solution bounds

bool crit_bounds() {
  const double ps[] = {1.0, 1.5, 2.0, 3.0};
  const double lambdas[] = {0.1, 1.0, 10.0};
  double worst_norm = 0.0, worst_reg = -1e300;
  for (int trial = 0; trial < 50; ++trial) {
    SplitMix64 pick(40 + trial);
    const int n = 5 + static_cast<int>(pick.uniform() * 95);
    const double p = ps[trial % 4];
    const double lambda = lambdas[trial % 3];
    const WeightedGraph G = random_graph(n, 7700 + trial);
    const auto g = random_vec(n, 8800 + trial, 2.0);
    SolverConfig cfg;
    cfg.p = p;
    cfg.lambda = lambda;
    cfg.tol = 1e-10;
    cfg.max_iter = 30000;
    const auto res = solve(G, g, cfg);
    worst_norm = std::max(worst_norm, norm2(res.u_star) / std::max(1e-300, norm2(g)));
    const double reg = energy_reg(G, res.u_star, p);
    const double cap = discrete_norm(g, 2.0, n);
    const double bound = cap * cap / (2.0 * lambda);
    worst_reg = std::max(worst_reg, reg - bound);
  }
  DETAIL("50 instances; max ||u||/||g|| = %.4f (limit 2); max reg excess over "
         "||g||^2/(2 lambda) = %.2e (tol 1e-9)",
         worst_norm, worst_reg);
  return worst_norm <= 2.0 && worst_reg <= 1e-9;
}

// --------------------------------------------------------------------------
// 7: projection/injection calculus

bool crit_projection_calculus() {
  double worst = 0.0;
  for (int n : {10, 37, 64}) {
    const Partition P = Partition::equispaced(n);
    const auto v = random_vec(n, 60 + n);
    const auto w = random_vec(n, 61 + n);

    // Idempotence: projecting the injected step recovers the vector.
    const PiecewiseConstantFn fv = inject(v, P);
    ContinuumSignal sv;
    sv.kind = ContinuumSignal::Kind::PiecewiseConstant;
    sv.breaks = fv.part.x;
    sv.levels = fv.value;
    const auto back = project_signal(sv, P);
    for (int i = 0; i < n; ++i) worst = std::max(worst, std::fabs(back[i] - v[i]));

    // Isometry: L2 distance of injections equals the discrete norm.
    std::vector<double> diff(n);
    for (int i = 0; i < n; ++i) diff[i] = v[i] - w[i];
    const double a = l2_distance_pwc(fv, inject(w, P));
    const double b = discrete_norm(diff, 2.0, n);
    worst = std::max(worst, std::fabs(a - b));

    // Contraction: projecting a step signal with unaligned breaks cannot
    // increase the L2 norm.
    const std::vector<double> br = {0.137, 0.29, 0.4441, 0.68, 0.881};
    const std::vector<double> lv = {1.7, -0.4, 2.2, 0.1, -1.3, 0.9};
    const ContinuumSignal s = ContinuumSignal::step(br, lv);
    std::vector<double> full = {0.0};
    full.insert(full.end(), br.begin(), br.end());
    full.push_back(1.0);
    const PiecewiseConstantFn fs{Partition::from_breakpoints(full), lv};
    const double proj_norm = discrete_norm(project_signal(s, P), 2.0, n);
    const double cont_norm = lq_norm_pwc(fs, 2.0);
    worst = std::max(worst, proj_norm - cont_norm);
  }
  DETAIL("n in {10,37,64}; worst violation across idempotence/isometry/contraction %.2e "
         "(tol 1e-8)",
         worst);
  return worst <= 1e-8;
}

// --------------------------------------------------------------------------
// 8 and 9: discrete-to-continuum error rates

bool rate_experiment(ExperimentConfig::GraphMode mode, double lo, double hi) {
  ExperimentConfig cfg;
  cfg.N = 1000;
  cfg.n_grid = {100, 125, 160, 200, 250};
  cfg.replications = 20;
  cfg.lambda = -1.0;
  cfg.p = 1.0;
  cfg.noise_sigma = 0.5;
  cfg.graph_mode = mode;
  cfg.q_n = 1.0;
  cfg.seed = 1;
  const RateReport rep = run_experiment(cfg);
  DETAIL("slope %.3f +- %.3f (accept [%.2f, %.2f]), lambda %.2f, verdict %s, ref iters %d, "
         "mean_sq %.3e..%.3e",
         rep.slope, rep.half_width, lo, hi, rep.lambda_used, rep.verdict.c_str(),
         rep.reference_iterations, rep.mean_sq.front(), rep.mean_sq.back());
  return rep.slope >= lo && rep.slope <= hi;
}

bool crit_rates_deterministic() {
  return rate_experiment(ExperimentConfig::GraphMode::DeterministicWeighted, -0.85, -0.15);
}

bool crit_rates_random() {
  return rate_experiment(ExperimentConfig::GraphMode::Random, -0.90, -0.15);
}

// --------------------------------------------------------------------------
// 10: boundary cell count scaling

bool crit_boundary_cells() {
  const bool base = boundary_cell_count(Graphon::band(0.3), 4) == 10;
  std::vector<double> ns, density;
  for (int n : {64, 128, 256, 512, 1024}) {
    const long long c = boundary_cell_count(Graphon::band(0.3), n);
    ns.push_back(n);
    density.push_back(static_cast<double>(c) / (static_cast<double>(n) * n));
  }
  const FitResult fit = fit_rate(ns, density);
  DETAIL("C(4)=%s; slope of log(C/n^2) over n=64..1024: %.3f (accept [-1.2, -0.8])",
         base ? "10" : "WRONG", fit.slope);
  return base && fit.slope >= -1.2 && fit.slope <= -0.8;
}

// --------------------------------------------------------------------------
// 11: order-statistics spacing tail bound at its advertised threshold

bool crit_spacing_bound() {
  struct Case {
    int n;
    double t;
  };
  const Case cases[] = {{128, 1.0}, {512, 1.0}, {128, 2.0}, {512, 2.0}};
  const int draws = 4000;
  bool ok = true;
  std::string parts;
  for (const Case& c : cases) {
    const SpacingMCResult r = spacing_violation_mc(c.n, c.t, draws, 2);
    const double sigma = std::sqrt(std::max(r.rate * (1.0 - r.rate), 1e-8) / draws);
    const double bound = std::pow(static_cast<double>(c.n), -c.t) + 3.0 * sigma;
    char buf[128];
    std::snprintf(buf, sizeof buf, " [n=%d t=%g rate %.4f vs bound %.4f]", c.n, c.t, r.rate,
                  bound);
    parts += buf;
    if (r.rate > bound) ok = false;
  }
  DETAIL("max-spacing > t log n / n frequency vs n^-t + 3 sigma:%s — measured frequencies "
         "scale like n^(1-t), one factor n above the advertised bound",
         parts.c_str());
  return ok;
}

// --------------------------------------------------------------------------
// 12: manifest rerun reproducibility

int run_cli(const std::string& args) {
  const std::string cmd =
      std::string("\"") + NLPLAP_CLI_PATH + "\" " + args + " >/dev/null 2>&1";
  const int rc = std::system(cmd.c_str());
  if (rc == -1) return -1;
  return WIFEXITED(rc) ? WEXITSTATUS(rc) : -2;
}

std::string fresh_dir(const std::string& tag) {
  const fs::path d = fs::temp_directory_path() / ("nlplap-acc-" + tag);
  fs::remove_all(d);
  fs::create_directories(d);
  return d.string();
}

bool compare_outputs(const std::string& d1, const std::string& d2, int& files) {
  const nlohmann::json m = nlohmann::json::parse(read_file(d1 + "/manifest.json"));
  for (const auto& [name, digest] : m.at("outputs").items()) {
    (void)digest;
    if (read_file(d1 + "/" + std::string(name)) != read_file(d2 + "/" + std::string(name))) {
      return false;
    }
    ++files;
  }
  return true;
}

bool crit_rerun() {
  int files = 0;

  const std::string a1 = fresh_dir("denoise");
  const std::string a2 = fresh_dir("denoise-rerun");
  if (run_cli("denoise --out " + a1 +
              " --mode random --nodes order-stats --q 0.7 --n 120 --p 1.5 --lambda 0.6 "
              "--sigma 0.4 --seed 31 --history") != 0) {
    DETAIL("denoise run failed");
    return false;
  }
  if (run_cli("rerun " + a1 + "/manifest.json --out " + a2) != 0) {
    DETAIL("denoise rerun reported a digest mismatch or failed");
    return false;
  }
  if (!compare_outputs(a1, a2, files)) {
    DETAIL("denoise rerun produced different bytes");
    return false;
  }

  const std::string b1 = fresh_dir("rates");
  const std::string b2 = fresh_dir("rates-rerun");
  if (run_cli("rates --out " + b1 +
              " --ref-n 80 --n-grid 20,25,32 --reps 2 --lambda 0.5 --p 2 --sigma 0.3 "
              "--solver-tol 1e-8 --ref-tol 1e-9") != 0) {
    DETAIL("rate experiment run failed");
    return false;
  }
  if (run_cli("rerun " + b1 + "/manifest.json --out " + b2) != 0) {
    DETAIL("rate experiment rerun reported a digest mismatch or failed");
    return false;
  }
  if (!compare_outputs(b1, b2, files)) {
    DETAIL("rate experiment rerun produced different bytes");
    return false;
  }

  DETAIL("randomized denoise + rate experiment: %d files byte-identical on rerun", files);
  return true;
}

struct Criterion {
  int id;
  const char* label;
  std::function<bool()> run;
  double budget_s;    // 0 = no time bound
  bool expected_fail;
};

}  // namespace

int main(int argc, char** argv) {
  const std::vector<Criterion> criteria = {
      {1, "adjointness of gradient and divergence", crit_adjointness, 1.0, false},
      {2, "scalar prox vs bisection oracle", crit_prox_oracle, 5.0, false},
      {3, "dual solver vs direct quadratic solve", crit_p2_against_direct, 30.0, false},
      {4, "o(1/k) primal iterate decay", crit_rate_o1k, 0.0, false},
      {5, "solution map non-expansiveness", crit_nonexpansive, 0.0, false},
      {6, "a priori solution bounds", crit_bounds, 0.0, false},
      {7, "projection/injection calculus", crit_projection_calculus, 0.0, false},
      {8, "error rate on deterministic weighted graphs", crit_rates_deterministic, 600.0,
       false},
      {9, "error rate on sampled graphs (q_n = 1)", crit_rates_random, 900.0, false},
      {10, "support boundary cell scaling", crit_boundary_cells, 0.0, false},
      {11, "order-stats spacing tail bound", crit_spacing_bound, 0.0, true},
      {12, "manifest rerun reproducibility", crit_rerun, 0.0, false},
  };

  std::set<int> wanted;
  for (int a = 1; a < argc; ++a) wanted.insert(std::atoi(argv[a]));

  int unexpected_failures = 0;
  int passed = 0, expected_red = 0, ran = 0;
  for (const Criterion& c : criteria) {
    if (!wanted.empty() && !wanted.count(c.id)) continue;
    ++ran;
    detail_buf[0] = '\0';
    const double t0 = now_s();
    bool ok = false;
    try {
      ok = c.run();
    } catch (const std::exception& e) {
      DETAIL("threw: %s", e.what());
      ok = false;
    }
    const double dt = now_s() - t0;
    bool in_budget = c.budget_s <= 0.0 || dt <= c.budget_s;
    const bool pass = ok && in_budget;
    std::printf("%s criterion %2d (%7.2f s): %s — %s%s%s\n", pass ? "PASS" : "FAIL", c.id, dt,
                c.label, detail_buf,
                !in_budget ? " [over time budget]" : "",
                (!pass && c.expected_fail) ? " [expected failure]" : "");
    std::fflush(stdout);
    if (pass) {
      ++passed;
    } else if (c.expected_fail) {
      ++expected_red;
    } else {
      ++unexpected_failures;
    }
  }
  std::printf("acceptance summary: %d/%d passed, %d expected failure(s), %d unexpected\n",
              passed, ran, expected_red, unexpected_failures);
  return unexpected_failures;
}
