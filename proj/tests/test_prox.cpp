#include <doctest.h>

#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "nlplap/matrix.hpp"
#include "nlplap/prox.hpp"
#include "nlplap/rng.hpp"

using namespace nlplap;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Independent oracle: the prox solves min_a (a-t)^2/2 + (gamma lambda_n / q)
// |a / lambda_n|^q; for q in (1, inf) the optimality condition
// a - t + gamma lambda_n^(1-q) a^(q-1) = 0 has a unique root in [0, t] for
// t >= 0, found here by plain bisection.
double prox_bisect(double t, const ProxParams& pp) {
  const double at = std::fabs(t);
  const double q = pp.q;
  double r;
  if (q == kInf) {
    r = std::min(at, pp.lambda_n);
  } else if (q == 1.0) {
    r = std::max(at - pp.gamma, 0.0);
  } else {
    const double c = pp.gamma * std::pow(pp.lambda_n, 1.0 - q);
    double lo = 0.0, hi = at;
    for (int it = 0; it < 200; ++it) {
      const double mid = 0.5 * (lo + hi);
      const double h = mid - at + c * std::pow(mid, q - 1.0);
      if (h > 0.0) {
        hi = mid;
      } else {
        lo = mid;
      }
    }
    r = 0.5 * (lo + hi);
  }
  return t < 0.0 ? -r : r;
}

}  // namespace

TEST_CASE("dual exponent pairs") {
  CHECK(dual_exponent(1.0) == kInf);
  CHECK(dual_exponent(2.0) == 2.0);
  CHECK(dual_exponent(1.5) == 3.0);
  CHECK(dual_exponent(4.0) == doctest::Approx(4.0 / 3.0).epsilon(1e-15));
  CHECK(dual_exponent(3.0) == 1.5);
  CHECK_THROWS_AS(dual_exponent(0.9), std::invalid_argument);
}

TEST_CASE("q = inf clamps to the interval [-lambda_n, lambda_n]") {
  const ProxParams pp{kInf, 0.7, 0.25};
  CHECK(prox_scalar(0.1, pp) == 0.1);
  CHECK(prox_scalar(0.25, pp) == 0.25);
  CHECK(prox_scalar(5.0, pp) == 0.25);
  CHECK(prox_scalar(-5.0, pp) == -0.25);
  CHECK(prox_scalar(0.0, pp) == 0.0);
}

TEST_CASE("q = 1 soft-thresholds by gamma") {
  const ProxParams pp{1.0, 0.3, 2.0};
  CHECK(prox_scalar(1.0, pp) == doctest::Approx(0.7).epsilon(1e-15));
  CHECK(prox_scalar(0.2, pp) == 0.0);
  CHECK(prox_scalar(-1.0, pp) == doctest::Approx(-0.7).epsilon(1e-15));
}

TEST_CASE("q = 2 rescales") {
  const ProxParams pp{2.0, 0.5, 0.25};
  // t / (1 + gamma/lambda_n) = t / 3.
  CHECK(prox_scalar(1.2, pp) == doctest::Approx(0.4).epsilon(1e-15));
  CHECK(prox_scalar(-1.2, pp) == doctest::Approx(-0.4).epsilon(1e-15));
}

TEST_CASE("q = 4 golden value: root of a + a^3 = 1") {
  // gamma = lambda_n = 1, q = 4 (p = 4/3), t = 1: the optimality condition is
  // a + a^3 = 1 with real root 0.6823278038280193.
  const ProxParams pp{4.0, 1.0, 1.0};
  CHECK(prox_scalar(1.0, pp) == doctest::Approx(0.6823278038280193).epsilon(1e-12));
  CHECK(prox_scalar(-1.0, pp) == doctest::Approx(-0.6823278038280193).epsilon(1e-12));
}

TEST_CASE("newton regime matches the bisection oracle across scales") {
  SplitMix64 rng(404);
  const double qs[] = {1.2, 1.5, 2.5, 3.0, 4.0, 8.0};
  for (int trial = 0; trial < 600; ++trial) {
    const double q = qs[trial % 6];
    const double gamma = std::exp(rng.uniform() * 12.0 - 6.0);    // 2.5e-3 .. 4e2
    const double lam = std::exp(rng.uniform() * 14.0 - 9.0);      // 1.2e-4 .. 1.5e2
    const double t = (rng.uniform() * 2.0 - 1.0) * std::exp(rng.uniform() * 6.0 - 3.0);
    const ProxParams pp{q, gamma, lam};
    const double got = prox_scalar(t, pp);
    const double want = prox_bisect(t, pp);
    CHECK(got == doctest::Approx(want).epsilon(1e-9));
    CHECK(std::fabs(got - want) <= 1e-10 * std::max(1.0, std::fabs(t)));
  }
}

TEST_CASE("prox is odd, monotone, and firmly nonexpansive in t") {
  SplitMix64 rng(405);
  const double qs[] = {1.0, 1.5, 2.0, 3.0, kInf};
  for (int trial = 0; trial < 200; ++trial) {
    const double q = qs[trial % 5];
    const ProxParams pp{q, 0.2 + rng.uniform(), 0.05 + rng.uniform()};
    const double t1 = rng.normal() * 2.0;
    const double t2 = t1 + rng.uniform() * 3.0 + 1e-9;
    CHECK(prox_scalar(-t1, pp) == -prox_scalar(t1, pp));
    const double d = (prox_scalar(t2, pp) - prox_scalar(t1, pp)) / (t2 - t1);
    CHECK(d >= -1e-12);
    CHECK(d <= 1.0 + 1e-12);
  }
}

TEST_CASE("prox stays in [0, t] for nonnegative input") {
  const ProxParams pp{3.0, 0.7, 0.2};
  for (double t : {0.0, 1e-12, 0.3, 2.0, 1e6}) {
    const double r = prox_scalar(t, pp);
    CHECK(r >= 0.0);
    CHECK(r <= t);
  }
}

TEST_CASE("prox parameter validation") {
  CHECK_THROWS_AS(prox_scalar(1.0, ProxParams{0.5, 0.1, 0.1}), std::invalid_argument);
  CHECK_THROWS_AS(prox_scalar(1.0, ProxParams{2.0, 0.0, 0.1}), std::invalid_argument);
  CHECK_THROWS_AS(prox_scalar(1.0, ProxParams{2.0, 0.1, 0.0}), std::invalid_argument);
  CHECK_THROWS_AS(prox_scalar(1.0, ProxParams{2.0, -1.0, 0.1}), std::invalid_argument);
}

TEST_CASE("field prox applies the scalar map entrywise") {
  SplitMix64 rng(406);
  const int n = 17;
  Matrix v(n);
  for (double& x : v.a) x = rng.normal();
  const ProxParams pp{3.0, 0.4, 0.15};
  const Matrix out = prox_field(v, pp);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      CHECK(out(i, j) == prox_scalar(v(i, j), pp));
    }
  }
}
