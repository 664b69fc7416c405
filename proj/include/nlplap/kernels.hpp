#pragma once

#include <vector>

#include "nlplap/matrix.hpp"
#include "nlplap/prox.hpp"

// Low-level n^2 sweeps behind the operators and the solver.  Every sweep has
// a serial reference implementation and an OpenMP variant (suffix _par); the
// two are bit-identical for any thread count because each accumulator has a
// fixed summation order: within a row ascending j, and contributions to a
// column accumulator arrive in ascending row index in both variants.  The
// dispatchers in operators.cpp/solver.cpp pick the serial versions whenever
// one thread is effective (the fused single sweeps are faster there).
namespace nlplap::kernels {

// True when OpenMP reports more than one available thread.
bool parallel_active();

// out_ij = kp_ij * (u_j - u_i)
void gradient_into(const Matrix& kp, const std::vector<double>& u, Matrix& out);
void gradient_into_par(const Matrix& kp, const std::vector<double>& u, Matrix& out);

// out_i = sum_m kp_mi v_mi - sum_j kp_ij v_ij
void divergence_into(const Matrix& kp, const Matrix& v, std::vector<double>& out);
void divergence_into_par(const Matrix& kp, const Matrix& v, std::vector<double>& out);

// sum_ij a_ij b_ij (row partials folded in row order)
double field_dot(const Matrix& a, const Matrix& b);
double field_dot_par(const Matrix& a, const Matrix& b);

// sum_ij w_ij |u_j - u_i|^p
double energy_sum(const Matrix& w, const std::vector<double>& u, double p);
double energy_sum_par(const Matrix& w, const std::vector<double>& u, double p);

// out_i = 2 sum_j kp_ij^2 (u_i - u_j); equals div(grad u) for symmetric kp.
void div_grad_into(const Matrix& kp, const std::vector<double>& u, std::vector<double>& out);
void div_grad_into_par(const Matrix& kp, const std::vector<double>& u, std::vector<double>& out);

// Elementwise prox of a field.
void prox_field_into(const Matrix& w, const ProxParams& pp, Matrix& out);
void prox_field_into_par(const Matrix& w, const ProxParams& pp, Matrix& out);

// Fused solver sweeps.  Pass A forms w = v + theta (v - v_prev) on the fly
// and accumulates div(w); pass B recomputes w, applies the prox of the
// gradient step v_next = prox(w + gamma kp (r_j - r_i)), and accumulates
// div(v_next) in the same sweep.
void fista_pass_a(const Matrix& kp, const Matrix& v, const Matrix& v_prev, double theta,
                  std::vector<double>& divw);
void fista_pass_a_par(const Matrix& kp, const Matrix& v, const Matrix& v_prev, double theta,
                      std::vector<double>& divw);
void fista_pass_b(const Matrix& kp, const Matrix& v, const Matrix& v_prev, double theta,
                  const std::vector<double>& r, double gamma, const ProxParams& pp,
                  Matrix& v_next, std::vector<double>& divv);
void fista_pass_b_par(const Matrix& kp, const Matrix& v, const Matrix& v_prev, double theta,
                      const std::vector<double>& r, double gamma, const ProxParams& pp,
                      Matrix& v_next, std::vector<double>& divv);

}  // namespace nlplap::kernels
