#pragma once

#include <vector>

#include "nlplap/graph.hpp"
#include "nlplap/matrix.hpp"

namespace nlplap {

struct EnergyBreakdown {
  double fidelity = 0.0;
  double regularizer = 0.0;
  double total = 0.0;
};

// Caches K^(1/p) once per (graph, p) pair for repeated applications.
class NonlocalOperator {
 public:
  NonlocalOperator(const WeightedGraph& G, double p);

  int n() const { return kp_.n; }
  const Matrix& kp() const { return kp_; }

  void gradient_into(const std::vector<double>& u, DualField& out) const;
  void divergence_into(const DualField& v, std::vector<double>& out) const;

  // Estimate of ||grad||_op^2 = lambda_max(div o grad) by power iteration to
  // relative tolerance tol; falls back to the certified upper bound
  // 2 * max over edges of (deg_i + deg_j) with deg_i = sum_j kp_ij^2 when the
  // iteration does not settle.  Zero graph -> 0.
  double norm_sq_estimate(double tol) const;

 private:
  Matrix kp_;
};

// V_ij = K_ij^(1/p) (u_j - u_i).  Throws for p < 1 or length mismatch.
DualField gradient(const WeightedGraph& G, const std::vector<double>& u, double p);

// out_i = sum_m K_mi^(1/p) V_mi - sum_j K_ij^(1/p) V_ij; the adjoint of
// gradient under the plain Euclidean pairings.
std::vector<double> divergence(const WeightedGraph& G, const DualField& v, double p);

// (1/(2 n^2 p)) sum_ij K_ij |u_j - u_i|^p
double energy_reg(const WeightedGraph& G, const std::vector<double>& u, double p);

// fidelity (1/(2 lambda n)) ||u - g||^2 plus energy_reg.
EnergyBreakdown energy_total(const WeightedGraph& G, const std::vector<double>& u,
                             const std::vector<double>& g, double lambda, double p);

// See NonlocalOperator::norm_sq_estimate.
double operator_norm_sq(const WeightedGraph& G, double p, double tol);

}  // namespace nlplap
