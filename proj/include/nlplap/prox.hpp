#pragma once

#include <cmath>
#include <stdexcept>

#include "nlplap/matrix.hpp"

namespace nlplap {

// Parameters of the dual penalty prox: argmin_a 1/2 (a-t)^2 + gamma *
// (lambda_n/q) |a/lambda_n|^q.  q = infinity is the box projection regime.
struct ProxParams {
  double q = 2.0;         // in [1, inf]
  double gamma = 1.0;     // step, > 0
  double lambda_n = 1.0;  // = lambda / (2n), > 0
};

// Hoelder conjugate: 1 -> inf, 2 -> 2, p -> p/(p-1).
double dual_exponent(double p);

namespace detail {
// Root of a - t + gamma lambda_n^(1-q) a^(q-1) on [0, t], t >= 0, by
// safeguarded Newton; residual <= 1e-12.
double prox_newton_pos(double t, double q, double gamma, double lambda_n);
}  // namespace detail

// Odd in t; closed forms for q in {1, 2, inf}, safeguarded Newton otherwise.
// Inline so the solver's elementwise sweeps pay no call per entry.
inline double prox_scalar(double t, const ProxParams& P) {
  if (!(P.q >= 1.0)) throw std::invalid_argument("prox exponent q must be >= 1");
  if (!(P.gamma > 0.0) || !(P.lambda_n > 0.0)) {
    throw std::invalid_argument("prox parameters gamma and lambda_n must be > 0");
  }
  const double at = std::abs(t);
  double r;
  if (std::isinf(P.q)) {
    r = std::min(at, P.lambda_n);
  } else if (P.q == 1.0) {
    r = std::max(at - P.gamma, 0.0);
  } else if (P.q == 2.0) {
    r = at / (1.0 + P.gamma / P.lambda_n);
  } else {
    r = detail::prox_newton_pos(at, P.q, P.gamma, P.lambda_n);
  }
  return t < 0.0 ? -r : r;
}

// Elementwise prox_scalar.
DualField prox_field(const DualField& W, const ProxParams& P);

}  // namespace nlplap
