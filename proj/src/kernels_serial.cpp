#include <cmath>

#include "nlplap/kernels.hpp"

// Serial reference sweeps.  Summation-order contract (the _par variants must
// reproduce it bit-for-bit): a row accumulator adds terms in ascending j; a
// column accumulator receives contributions in ascending row index; a global
// scalar folds per-row partial sums in ascending row index.
namespace nlplap::kernels {

void gradient_into(const Matrix& kp, const std::vector<double>& u, Matrix& out) {
  const int n = kp.n;
  for (int i = 0; i < n; ++i) {
    const double* kr = kp.row(i);
    double* orow = out.row(i);
    const double ui = u[i];
    for (int j = 0; j < n; ++j) orow[j] = kr[j] * (u[j] - ui);
  }
}

void divergence_into(const Matrix& kp, const Matrix& v, std::vector<double>& out) {
  const int n = kp.n;
  std::vector<double> col(n, 0.0);
  std::vector<double> rowd(n, 0.0);
  for (int i = 0; i < n; ++i) {
    const double* kr = kp.row(i);
    const double* vr = v.row(i);
    double rd = 0.0;
    for (int j = 0; j < n; ++j) {
      const double t = kr[j] * vr[j];
      rd += t;
      col[j] += t;
    }
    rowd[i] = rd;
  }
  out.resize(n);
  for (int i = 0; i < n; ++i) out[i] = col[i] - rowd[i];
}

double field_dot(const Matrix& a, const Matrix& b) {
  const int n = a.n;
  double total = 0.0;
  for (int i = 0; i < n; ++i) {
    const double* ar = a.row(i);
    const double* br = b.row(i);
    double s = 0.0;
    for (int j = 0; j < n; ++j) s += ar[j] * br[j];
    total += s;
  }
  return total;
}

double energy_sum(const Matrix& w, const std::vector<double>& u, double p) {
  const int n = w.n;
  double total = 0.0;
  for (int i = 0; i < n; ++i) {
    const double* wr = w.row(i);
    const double ui = u[i];
    double s = 0.0;
    if (p == 1.0) {
      for (int j = 0; j < n; ++j) s += wr[j] * std::abs(u[j] - ui);
    } else if (p == 2.0) {
      for (int j = 0; j < n; ++j) {
        const double d = u[j] - ui;
        s += wr[j] * d * d;
      }
    } else {
      for (int j = 0; j < n; ++j) s += wr[j] * std::pow(std::abs(u[j] - ui), p);
    }
    total += s;
  }
  return total;
}

void div_grad_into(const Matrix& kp, const std::vector<double>& u, std::vector<double>& out) {
  const int n = kp.n;
  out.resize(n);
  for (int i = 0; i < n; ++i) {
    const double* kr = kp.row(i);
    const double ui = u[i];
    double s = 0.0;
    for (int j = 0; j < n; ++j) s += kr[j] * kr[j] * (ui - u[j]);
    out[i] = 2.0 * s;
  }
}

void prox_field_into(const Matrix& w, const ProxParams& pp, Matrix& out) {
  const int n = w.n;
  for (int i = 0; i < n; ++i) {
    const double* wr = w.row(i);
    double* orow = out.row(i);
    for (int j = 0; j < n; ++j) orow[j] = prox_scalar(wr[j], pp);
  }
}

void fista_pass_a(const Matrix& kp, const Matrix& v, const Matrix& v_prev, double theta,
                  std::vector<double>& divw) {
  const int n = kp.n;
  std::vector<double> col(n, 0.0);
  std::vector<double> rowd(n, 0.0);
  for (int i = 0; i < n; ++i) {
    const double* kr = kp.row(i);
    const double* vr = v.row(i);
    const double* pr = v_prev.row(i);
    double rd = 0.0;
    for (int j = 0; j < n; ++j) {
      const double w = vr[j] + theta * (vr[j] - pr[j]);
      const double t = kr[j] * w;
      rd += t;
      col[j] += t;
    }
    rowd[i] = rd;
  }
  divw.resize(n);
  for (int i = 0; i < n; ++i) divw[i] = col[i] - rowd[i];
}

void fista_pass_b(const Matrix& kp, const Matrix& v, const Matrix& v_prev, double theta,
                  const std::vector<double>& r, double gamma, const ProxParams& pp,
                  Matrix& v_next, std::vector<double>& divv) {
  const int n = kp.n;
  std::vector<double> col(n, 0.0);
  std::vector<double> rowd(n, 0.0);
  for (int i = 0; i < n; ++i) {
    const double* kr = kp.row(i);
    const double* vr = v.row(i);
    const double* pr = v_prev.row(i);
    double* nr = v_next.row(i);
    const double ri = r[i];
    double rd = 0.0;
    for (int j = 0; j < n; ++j) {
      const double w = vr[j] + theta * (vr[j] - pr[j]);
      const double e = prox_scalar(w + gamma * kr[j] * (r[j] - ri), pp);
      nr[j] = e;
      const double t = kr[j] * e;
      rd += t;
      col[j] += t;
    }
    rowd[i] = rd;
  }
  divv.resize(n);
  for (int i = 0; i < n; ++i) divv[i] = col[i] - rowd[i];
}

}  // namespace nlplap::kernels
