#include "nlplap/consistency.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "nlplap/rng.hpp"
#include "nlplap/solver.hpp"

namespace nlplap {

void ExperimentConfig::validate() const {
  if (N < 2) throw std::invalid_argument("reference size N must be >= 2");
  if (n_grid.empty()) throw std::invalid_argument("n_grid must not be empty");
  for (int n : n_grid) {
    if (n < 2) throw std::invalid_argument("every n in n_grid must be >= 2");
    if (n > N) throw std::invalid_argument("every n in n_grid must be <= N");
  }
  if (replications < 1) throw std::invalid_argument("replications must be >= 1");
  if (!(p >= 1.0)) throw std::invalid_argument("p must be >= 1");
  if (!(noise_sigma >= 0.0)) throw std::invalid_argument("noise_sigma must be >= 0");
  if (!(q_n > 0.0)) throw std::invalid_argument("q_n must be > 0");
  if (!(solver_tol >= 0.0) || !(reference_tol >= 0.0)) {
    throw std::invalid_argument("solver tolerances must be >= 0");
  }
  if (solver_max_iter < 1 || reference_max_iter < 1) {
    throw std::invalid_argument("iteration caps must be >= 1");
  }
}

namespace {

// Pilot grid for the unstated regularization weight: denoising error against
// the projected clean signal on a single deterministic problem at the largest
// subsampled size, then frozen for the whole experiment.
double pilot_lambda(const ExperimentConfig& cfg, const Graphon& K, const ContinuumSignal& sig) {
  const int n = *std::max_element(cfg.n_grid.begin(), cfg.n_grid.end());
  const Partition P = Partition::equispaced(n);
  const std::vector<double> clean = project_signal(sig, P);
  std::vector<double> g = clean;
  SplitMix64 noise(derive_stream(cfg.seed, "pilot-noise"));
  for (double& v : g) v += cfg.noise_sigma * noise.normal();
  const WeightedGraph G = deterministic_weighted(K, n);

  const double grid[] = {0.02, 0.05, 0.1, 0.2, 0.5, 1.0, 2.0, 5.0};
  double best_lambda = grid[0];
  double best_err = std::numeric_limits<double>::infinity();
  for (double lam : grid) {
    SolverConfig sc;
    sc.p = cfg.p;
    sc.lambda = lam;
    sc.tol = 1e-6;
    sc.max_iter = 2500;
    const SolveResult r = solve(G, g, sc);
    const double err = discrete_norm([&] {
      std::vector<double> d(clean.size());
      for (std::size_t i = 0; i < d.size(); ++i) d[i] = r.u_star[i] - clean[i];
      return d;
    }(), 2.0, n);
    if (err < best_err) {
      best_err = err;
      best_lambda = lam;
    }
  }
  return best_lambda;
}

}  // namespace

Reference make_reference(const ExperimentConfig& cfg) {
  cfg.validate();
  const Graphon K = parse_kernel_spec(cfg.kernel);
  const ContinuumSignal sig = parse_signal_spec(cfg.signal);
  const Partition PN = Partition::equispaced(cfg.N);

  Reference ref;
  ref.clean_N = project_signal(sig, PN);
  ref.g_N = ref.clean_N;
  SplitMix64 noise(derive_stream(cfg.seed, "noise"));
  for (double& v : ref.g_N) v += cfg.noise_sigma * noise.normal();

  ref.lambda_used = cfg.lambda > 0.0 ? cfg.lambda : pilot_lambda(cfg, K, sig);

  // The reference problem is always the deterministic cell-averaged graph:
  // the continuum surrogate must not fluctuate with graph_mode.
  const WeightedGraph G = deterministic_weighted(K, cfg.N);
  SolverConfig sc;
  sc.p = cfg.p;
  sc.lambda = ref.lambda_used;
  sc.tol = cfg.reference_tol;
  sc.max_iter = cfg.reference_max_iter;
  const SolveResult r = solve(G, ref.g_N, sc);
  ref.u_ref = inject(r.u_star, PN);
  ref.iterations = r.iterations;
  ref.final_residual = r.final_residual;
  return ref;
}

double run_replication(const ExperimentConfig& cfg, const Reference& ref, int n,
                       std::uint64_t rep_seed) {
  if (n < 2) throw std::invalid_argument("replication size n must be >= 2");
  if (n > cfg.N) throw std::invalid_argument("replication size n must be <= N");
  const Graphon K = parse_kernel_spec(cfg.kernel);

  // n of [N] without replacement (partial Fisher-Yates), then sorted so the
  // subsample keeps its spatial order on the equispaced n-partition.
  SplitMix64 rng(derive_stream(rep_seed, "subsample"));
  std::vector<int> pool(cfg.N);
  for (int i = 0; i < cfg.N; ++i) pool[i] = i;
  for (int i = 0; i < n; ++i) {
    const int j = i + static_cast<int>(rng.uniform() * (cfg.N - i));
    std::swap(pool[i], pool[std::min(j, cfg.N - 1)]);
  }
  std::vector<int> idx(pool.begin(), pool.begin() + n);
  std::sort(idx.begin(), idx.end());

  std::vector<double> g_n(n);
  for (int i = 0; i < n; ++i) g_n[i] = ref.g_N[idx[i]];

  WeightedGraph G;
  switch (cfg.graph_mode) {
    case ExperimentConfig::GraphMode::DeterministicWeighted:
      G = deterministic_weighted(K, n);
      break;
    case ExperimentConfig::GraphMode::Simple:
      G = simple_graph(K, n);
      break;
    case ExperimentConfig::GraphMode::Random: {
      RandomGraphConfig rc;
      rc.n = n;
      rc.q_n = cfg.q_n;
      rc.seed = derive_stream(rep_seed, "graph");
      rc.node_mode = RandomGraphConfig::NodeMode::Equispaced;
      G = sample_inhomogeneous(K, rc);
      break;
    }
  }

  SolverConfig sc;
  sc.p = cfg.p;
  sc.lambda = ref.lambda_used;
  sc.tol = cfg.solver_tol;
  sc.max_iter = cfg.solver_max_iter;
  const SolveResult r = solve(G, g_n, sc);

  const double err = l2_distance_pwc(inject(r.u_star, Partition::equispaced(n)), ref.u_ref);
  return err * err;
}

FitResult fit_rate(const std::vector<double>& ns, const std::vector<double>& mean_sq_errors) {
  if (ns.size() != mean_sq_errors.size()) {
    throw std::invalid_argument("fit inputs must have equal length");
  }
  std::vector<double> distinct = ns;
  std::sort(distinct.begin(), distinct.end());
  distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
  if (distinct.size() < 3) throw std::invalid_argument("rate fit needs >= 3 distinct n");
  for (double e : mean_sq_errors) {
    if (!(e > 0.0)) throw std::invalid_argument("rate fit needs positive errors");
  }

  const std::size_t m = ns.size();
  std::vector<double> x(m), y(m);
  for (std::size_t i = 0; i < m; ++i) {
    x[i] = std::log(ns[i]);
    y[i] = std::log(mean_sq_errors[i]);
  }
  double xm = 0.0, ym = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    xm += x[i];
    ym += y[i];
  }
  xm /= m;
  ym /= m;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    sxx += (x[i] - xm) * (x[i] - xm);
    sxy += (x[i] - xm) * (y[i] - ym);
  }
  FitResult f;
  f.slope = sxy / sxx;
  f.intercept = ym - f.slope * xm;
  double rss = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    const double e = y[i] - (f.intercept + f.slope * x[i]);
    rss += e * e;
  }
  if (m > 2) {
    f.half_width = 2.0 * std::sqrt(rss / (m - 2) / sxx);
  }
  return f;
}

RateReport run_experiment(const ExperimentConfig& cfg) {
  cfg.validate();
  const Reference ref = make_reference(cfg);

  RateReport rep;
  rep.ns = cfg.n_grid;
  rep.lambda_used = ref.lambda_used;
  rep.reference_iterations = ref.iterations;
  rep.reference_residual = ref.final_residual;
  rep.theory_exponent = -0.5;

  for (int n : cfg.n_grid) {
    double sum = 0.0, sum_sq = 0.0;
    for (int r = 0; r < cfg.replications; ++r) {
      const std::uint64_t rep_seed = derive_stream(
          cfg.seed, "rep", (static_cast<std::uint64_t>(n) << 20) + static_cast<std::uint64_t>(r));
      const double e = run_replication(cfg, ref, n, rep_seed);
      sum += e;
      sum_sq += e * e;
    }
    const double mean = sum / cfg.replications;
    double var = 0.0;
    if (cfg.replications > 1) {
      var = std::max(0.0, (sum_sq - cfg.replications * mean * mean) / (cfg.replications - 1));
    }
    rep.mean_sq.push_back(mean);
    rep.std_dev.push_back(std::sqrt(var));
    rep.std_mean.push_back(std::sqrt(var / cfg.replications));
  }

  std::vector<double> ns_d(cfg.n_grid.begin(), cfg.n_grid.end());
  const FitResult f = fit_rate(ns_d, rep.mean_sq);
  rep.slope = f.slope;
  rep.intercept = f.intercept;
  rep.half_width = f.half_width;

  constexpr double kBand = 0.35;
  if (rep.slope > rep.theory_exponent + kBand) {
    rep.verdict = "too-slow";
  } else if (rep.slope < rep.theory_exponent - kBand) {
    rep.verdict = "too-fast";
  } else {
    rep.verdict = "consistent";
  }
  return rep;
}

double kernel_approx_error_pp(const Graphon& K, int n, double pprime) {
  if (K.form() != Graphon::Form::Band) {
    throw std::invalid_argument("exact kernel-approximation error needs a band kernel");
  }
  if (!(pprime >= 1.0)) throw std::invalid_argument("exponent p' must be >= 1");
  const double delta = K.support_radius();
  const double h = 1.0 / n;
  // On each cell the kernel is an indicator and its average is theta, so
  // the cell integral of |K - theta|^p' is area (theta (1-theta)^p' +
  // (1-theta) theta^p').  Averages depend only on |i-j|.
  double total = 0.0;
  for (int k = 0; k < n; ++k) {
    const double theta = [&] {
      // average of the band over [0,h] x [kh,(k+1)h]
      const double a = 0.0, b = h, c = k * h, d = (k + 1) * h;
      auto hh = [&](double x) {
        return std::max(0.0, std::min(x + delta, d) - std::max(x - delta, c));
      };
      double knots[6] = {a, b, c - delta, d - delta, c + delta, d + delta};
      std::sort(knots, knots + 6);
      double acc = 0.0;
      for (int s = 0; s < 5; ++s) {
        const double lo = std::clamp(knots[s], a, b);
        const double hi = std::clamp(knots[s + 1], a, b);
        if (hi > lo) acc += 0.5 * (hh(lo) + hh(hi)) * (hi - lo);
      }
      return acc / (h * h);
    }();
    const double cell = std::pow(h, 2.0) * (theta * std::pow(1.0 - theta, pprime) +
                                            (1.0 - theta) * std::pow(theta, pprime));
    const long long count = k == 0 ? n : 2LL * (n - k);
    total += static_cast<double>(count) * cell;
  }
  return total;
}

SpacingMCResult spacing_violation_mc(int n, double t, int draws, std::uint64_t seed) {
  if (n < 2 || draws < 1) throw std::invalid_argument("spacing MC needs n >= 2 and draws >= 1");
  SpacingMCResult res;
  res.draws = draws;
  res.threshold = t * std::log(static_cast<double>(n)) / n;
  RandomGraphConfig rc;
  rc.n = n;
  rc.node_mode = RandomGraphConfig::NodeMode::UniformOrderStats;
  for (int d = 0; d < draws; ++d) {
    rc.seed = derive_stream(seed, "spacing", static_cast<std::uint64_t>(d));
    if (sample_nodes(rc).max_spacing() > res.threshold) ++res.violations;
  }
  res.rate = static_cast<double>(res.violations) / draws;
  return res;
}

}  // namespace nlplap
