#include "nlplap/prox.hpp"

#include <cmath>
#include <limits>

#include "nlplap/kernels.hpp"

namespace nlplap {

double dual_exponent(double p) {
  if (!(p >= 1.0)) throw std::invalid_argument("primal exponent p must be >= 1");
  if (p == 1.0) return std::numeric_limits<double>::infinity();
  return p / (p - 1.0);
}

namespace detail {

double prox_newton_pos(double t, double q, double gamma, double lambda_n) {
  if (t == 0.0) return 0.0;
  const double c = gamma * std::pow(lambda_n, 1.0 - q);
  // Residual h(a) = a - t + c a^(q-1) is strictly increasing with h(0) = -t
  // and h(t) >= 0, so the root sits in [0, t].
  double lo = 0.0, hi = t;
  double a = t / (1.0 + c);
  if (!(a > lo) || !(a < hi)) a = 0.5 * t;
  for (int it = 0; it < 200; ++it) {
    const double h = a - t + c * std::pow(a, q - 1.0);
    if (std::isfinite(h) && std::abs(h) <= 1e-12) return a;
    if (!std::isfinite(h) || h > 0.0) {
      hi = a;
    } else {
      lo = a;
    }
    const double dh = 1.0 + c * (q - 1.0) * std::pow(a, q - 2.0);
    double an = std::isfinite(dh) ? a - h / dh : 0.5 * (lo + hi);
    if (!std::isfinite(an) || an <= lo || an >= hi) an = 0.5 * (lo + hi);
    if (an == a) break;
    a = an;
  }
  return 0.5 * (lo + hi);
}

}  // namespace detail

DualField prox_field(const DualField& W, const ProxParams& P) {
  DualField out(W.n);
  if (kernels::parallel_active()) {
    kernels::prox_field_into_par(W, P, out);
  } else {
    kernels::prox_field_into(W, P, out);
  }
  return out;
}

}  // namespace nlplap
