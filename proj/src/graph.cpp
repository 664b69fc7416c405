#include "nlplap/graph.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "nlplap/rng.hpp"

namespace nlplap {

double WeightedGraph::max_weight() const {
  double m = 0.0;
  for (double v : w.a) m = std::max(m, v);
  return m;
}

bool WeightedGraph::is_zero() const {
  for (double v : w.a) {
    if (v != 0.0) return false;
  }
  return true;
}

long long WeightedGraph::edge_count() const {
  long long c = 0;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      if (w(i, j) != 0.0) ++c;
    }
  }
  return c;
}

namespace {

void zero_diagonal(Matrix& m) {
  for (int i = 0; i < m.n; ++i) m(i, i) = 0.0;
}

}  // namespace

WeightedGraph deterministic_weighted(const Graphon& K, int n) {
  if (n < 2) throw std::invalid_argument("graph needs n >= 2");
  WeightedGraph g;
  g.n = n;
  g.kind = WeightedGraph::Kind::WeightedAvg;
  g.w = project_kernel(K, Partition::equispaced(n));
  zero_diagonal(g.w);
  return g;
}

WeightedGraph simple_graph(const Graphon& K, int n) {
  if (n < 2) throw std::invalid_argument("graph needs n >= 2");
  WeightedGraph g;
  g.n = n;
  g.kind = WeightedGraph::Kind::Simple01;
  g.w = project_kernel_simple(K, Partition::equispaced(n));
  zero_diagonal(g.w);
  return g;
}

Partition sample_nodes(const RandomGraphConfig& cfg) {
  if (cfg.n < 1) throw std::invalid_argument("node count must be >= 1");
  if (cfg.node_mode == RandomGraphConfig::NodeMode::Equispaced) {
    return Partition::equispaced(cfg.n);
  }
  // n i.i.d. Uniform[0,1]; the n-1 smallest order statistics become the
  // interior breakpoints, so the last cell absorbs ]X_(n-1), 1].
  SplitMix64 rng(derive_stream(cfg.seed, "nodes"));
  std::vector<double> draws(cfg.n);
  for (double& d : draws) d = rng.uniform();
  std::sort(draws.begin(), draws.end());
  std::vector<double> bp;
  bp.reserve(cfg.n + 1);
  bp.push_back(0.0);
  for (int i = 0; i + 1 < cfg.n; ++i) bp.push_back(draws[i]);
  bp.push_back(1.0);
  return Partition::from_breakpoints(std::move(bp));
}

Matrix wedge_weights(const Graphon& K, const Partition& P, double q_n) {
  if (!(q_n > 0.0)) throw std::invalid_argument("q_n must be > 0");
  for (int i = 0; i < P.cells(); ++i) {
    if (!(P.width(i) > 0.0)) throw std::invalid_argument("degenerate partition cell");
  }
  Matrix m = project_kernel(K, P);
  const double cap = 1.0 / q_n;
  for (double& v : m.a) v = std::min(v, cap);
  zero_diagonal(m);
  return m;
}

WeightedGraph sample_inhomogeneous(const Graphon& K, const RandomGraphConfig& cfg) {
  if (cfg.n < 2) throw std::invalid_argument("graph needs n >= 2");
  const Partition P = sample_nodes(cfg);
  const Matrix wedge = wedge_weights(K, P, cfg.q_n);
  WeightedGraph g;
  g.n = cfg.n;
  g.kind = WeightedGraph::Kind::BernoulliScaled;
  g.q_n = cfg.q_n;
  g.seed = cfg.seed;
  g.w = Matrix(cfg.n);
  const double inv_q = 1.0 / cfg.q_n;
  // Per-row substreams keep the draw deterministic under row parallelism.
#pragma omp parallel for schedule(static)
  for (int i = 0; i < cfg.n; ++i) {
    SplitMix64 rng(derive_stream(cfg.seed, "edges", static_cast<std::uint64_t>(i)));
    for (int j = i + 1; j < cfg.n; ++j) {
      const double u = rng.uniform();
      g.w(i, j) = u < cfg.q_n * wedge(i, j) ? inv_q : 0.0;
    }
  }
  for (int i = 0; i < cfg.n; ++i) {
    for (int j = i + 1; j < cfg.n; ++j) g.w(j, i) = g.w(i, j);
  }
  return g;
}

WeightedGraph coordinate_graph(const std::vector<Point2>& coords, double delta) {
  if (!(delta > 0.0)) throw std::invalid_argument("neighborhood radius delta must be > 0");
  const int n = static_cast<int>(coords.size());
  if (n < 2) throw std::invalid_argument("graph needs n >= 2");
  for (const Point2& p : coords) {
    if (!std::isfinite(p.x) || !std::isfinite(p.y)) {
      throw std::invalid_argument("coordinates must be finite");
    }
  }
  WeightedGraph g;
  g.n = n;
  g.kind = WeightedGraph::Kind::WeightedAvg;
  g.w = Matrix(n);
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      const double d = std::hypot(coords[i].x - coords[j].x, coords[i].y - coords[j].y);
      const double v = d <= delta ? std::exp(-d) : 0.0;
      g.w(i, j) = v;
      g.w(j, i) = v;
    }
  }
  return g;
}

}  // namespace nlplap
