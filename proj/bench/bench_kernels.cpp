// Timing comparison of the serial reference sweeps against the OpenMP
// variants, plus a whole-solver run at each size.  The two variants must
// agree bit for bit; this harness checks that while it times them.
//
// Usage: nlplap_bench [n1 n2 ...]   (defaults: 256 512 1024)

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <string>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "nlplap/graph.hpp"
#include "nlplap/graphon.hpp"
#include "nlplap/kernels.hpp"
#include "nlplap/operators.hpp"
#include "nlplap/rng.hpp"
#include "nlplap/solver.hpp"

using namespace nlplap;

namespace {

double now_s() {
  using clock = std::chrono::steady_clock;
  return std::chrono::duration<double>(clock::now().time_since_epoch()).count();
}

int threads() {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

struct Timed {
  double seconds = 0.0;
  int reps = 0;
};

template <class F>
Timed time_fn(F&& f, double budget_s) {
  // One warm-up call, then repeat until the budget is spent.
  f();
  Timed t;
  const double start = now_s();
  do {
    f();
    ++t.reps;
    t.seconds = now_s() - start;
  } while (t.seconds < budget_s && t.reps < 1000);
  t.seconds /= t.reps;
  return t;
}

bool bits_equal(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] != b[i]) return false;
  }
  return true;
}

void row(const char* name, const Timed& ser, const Timed& par, bool same) {
  std::printf("  %-16s %10.3f ms %10.3f ms   x%5.2f   %s\n", name, 1e3 * ser.seconds,
              1e3 * par.seconds, ser.seconds / par.seconds, same ? "bit-equal" : "MISMATCH");
}

void bench_size(int n) {
  std::printf("n = %d\n", n);
  const Graphon K = Graphon::band(0.3);
  const WeightedGraph G = deterministic_weighted(K, n);
  const double p = 1.5;
  NonlocalOperator op(G, p);
  const Matrix& kp = op.kp();

  SplitMix64 rng(derive_stream(42, "bench", static_cast<std::uint64_t>(n)));
  std::vector<double> u(n);
  for (double& x : u) x = rng.normal();
  std::vector<double> r(n);
  for (double& x : r) x = rng.normal();

  Matrix v(n), v_prev(n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      v(i, j) = rng.normal();
      v_prev(i, j) = rng.normal();
    }
  }

  const double budget = 0.2;
  Matrix f1(n), f2(n);
  std::vector<double> o1(n), o2(n);
  const ProxParams pp{dual_exponent(p), 0.05, 0.01};

  {
    auto ts = time_fn([&] { kernels::gradient_into(kp, u, f1); }, budget);
    auto tp = time_fn([&] { kernels::gradient_into_par(kp, u, f2); }, budget);
    row("gradient", ts, tp, bits_equal(f1.a, f2.a));
  }
  {
    auto ts = time_fn([&] { kernels::divergence_into(kp, v, o1); }, budget);
    auto tp = time_fn([&] { kernels::divergence_into_par(kp, v, o2); }, budget);
    row("divergence", ts, tp, bits_equal(o1, o2));
  }
  {
    auto ts = time_fn([&] { kernels::div_grad_into(kp, u, o1); }, budget);
    auto tp = time_fn([&] { kernels::div_grad_into_par(kp, u, o2); }, budget);
    row("div_grad", ts, tp, bits_equal(o1, o2));
  }
  {
    double s1 = 0, s2 = 0;
    auto ts = time_fn([&] { s1 = kernels::energy_sum(G.w, u, p); }, budget);
    auto tp = time_fn([&] { s2 = kernels::energy_sum_par(G.w, u, p); }, budget);
    row("energy_sum", ts, tp, s1 == s2);
  }
  {
    auto ts = time_fn([&] { kernels::prox_field_into(v, pp, f1); }, budget);
    auto tp = time_fn([&] { kernels::prox_field_into_par(v, pp, f2); }, budget);
    row("prox_field", ts, tp, bits_equal(f1.a, f2.a));
  }
  {
    auto ts = time_fn([&] { kernels::fista_pass_a(kp, v, v_prev, 0.6, o1); }, budget);
    auto tp = time_fn([&] { kernels::fista_pass_a_par(kp, v, v_prev, 0.6, o2); }, budget);
    row("fista_pass_a", ts, tp, bits_equal(o1, o2));
  }
  {
    std::vector<double> d1(n), d2(n);
    auto ts = time_fn(
        [&] { kernels::fista_pass_b(kp, v, v_prev, 0.6, r, 0.05, pp, f1, d1); }, budget);
    auto tp = time_fn(
        [&] { kernels::fista_pass_b_par(kp, v, v_prev, 0.6, r, 0.05, pp, f2, d2); }, budget);
    row("fista_pass_b", ts, tp, bits_equal(f1.a, f2.a) && bits_equal(d1, d2));
  }

  {
    std::vector<double> g(n);
    for (int i = 0; i < n; ++i) g[i] = u[i];
    SolverConfig sc;
    sc.p = p;
    sc.lambda = 1.0;
    sc.max_iter = 200;
    sc.tol = 0.0;  // fixed iteration count so sizes compare
    const double t0 = now_s();
    const SolveResult res = solve(G, g, sc);
    const double dt = now_s() - t0;
    std::printf("  solve: %d iterations in %.3f s (%.3f ms/iter), residual %.3e\n",
                res.iterations, dt, 1e3 * dt / res.iterations, res.final_residual);
  }
  std::printf("\n");
}

}  // namespace

int main(int argc, char** argv) {
  std::printf("kernel benchmark, %d thread(s)\n", threads());
  std::printf("  %-16s %13s %13s %8s\n\n", "sweep", "serial", "openmp", "speedup");
  std::vector<int> sizes;
  for (int a = 1; a < argc; ++a) sizes.push_back(std::atoi(argv[a]));
  if (sizes.empty()) sizes = {256, 512, 1024};
  for (int n : sizes) {
    if (n < 2) {
      std::fprintf(stderr, "skipping invalid size %d\n", n);
      continue;
    }
    bench_size(n);
  }
  return 0;
}
