#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "nlplap/graph.hpp"
#include "nlplap/graphon.hpp"

namespace nlplap {

// Discrete-to-continuum rate experiment: reference solve at N, subsampled
// solves on the equispaced n-partition, exact L2 errors via injections,
// replication statistics, log-log rate fit.
struct ExperimentConfig {
  enum class GraphMode { DeterministicWeighted, Simple, Random };

  int N = 1000;
  std::vector<int> n_grid;
  int replications = 20;
  double lambda = -1.0;  // < 0: pilot grid search on the reference, then frozen
  double p = 1.0;
  std::string kernel = "kind=band,delta=0.3";
  std::string signal = "steps5";
  double noise_sigma = 0.5;
  GraphMode graph_mode = GraphMode::DeterministicWeighted;
  double q_n = 1.0;
  std::uint64_t seed = 1;
  double solver_tol = 1e-7;
  int solver_max_iter = 4000;
  double reference_tol = 1e-11;
  int reference_max_iter = 20000;

  void validate() const;  // throws std::invalid_argument
};

struct Reference {
  PiecewiseConstantFn u_ref;   // injected solution at N
  std::vector<double> g_N;     // noisy data at N
  std::vector<double> clean_N; // projected clean signal
  double lambda_used = 0.0;
  int iterations = 0;
  double final_residual = 0.0;
};

struct FitResult {
  double slope = 0.0;
  double intercept = 0.0;
  double half_width = 0.0;  // 2 x standard error of the slope
};

struct RateReport {
  std::vector<int> ns;
  std::vector<double> mean_sq;   // mean of squared L2 errors per n
  std::vector<double> std_dev;   // std of squared errors
  std::vector<double> std_mean;  // std of the mean (std_dev / sqrt(reps))
  double slope = 0.0;
  double intercept = 0.0;
  double half_width = 0.0;
  double theory_exponent = -0.5;
  std::string verdict;  // consistent | too-slow | too-fast
  double lambda_used = 0.0;
  int reference_iterations = 0;
  double reference_residual = 0.0;
};

// Builds g_N = project(clean) + sigma * noise (stream "noise"), solves at N
// with the tight tolerance, injects.  lambda < 0 triggers the pilot search.
Reference make_reference(const ExperimentConfig& cfg);

// One replication: subsample n of [N] without replacement (sorted), restrict
// g_N, build the n-graph per graph_mode on the equispaced n-partition, solve
// with the frozen lambda, return l2_distance_pwc(inject(u_n), reference)^2.
double run_replication(const ExperimentConfig& cfg, const Reference& ref, int n,
                       std::uint64_t rep_seed);

// OLS of log(mean_sq) on log(n); throws on fewer than 3 distinct n or
// nonpositive errors.
FitResult fit_rate(const std::vector<double>& ns, const std::vector<double>& mean_sq_errors);

RateReport run_experiment(const ExperimentConfig& cfg);

// ||K - I_n K_n||_{Lp'}^{p'} on the equispaced mesh, exact for band kernels:
// per cell the average theta contributes area * (theta (1-theta)^p' +
// (1-theta) theta^p').
double kernel_approx_error_pp(const Graphon& K, int n, double pprime);

struct SpacingMCResult {
  int draws = 0;
  int violations = 0;
  double rate = 0.0;
  double threshold = 0.0;  // t log n / n
};

// Monte-Carlo frequency of max_spacing > t log n / n over order-statistics
// partitions of size n.
SpacingMCResult spacing_violation_mc(int n, double t, int draws, std::uint64_t seed);

}  // namespace nlplap
