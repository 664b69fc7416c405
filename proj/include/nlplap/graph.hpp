#pragma once

#include <cstdint>
#include <vector>

#include "nlplap/graphon.hpp"
#include "nlplap/matrix.hpp"

namespace nlplap {

// Symmetric nonnegative weight table with zero diagonal.  kind records how
// the weights were produced; q_n and seed are meaningful for the Bernoulli
// model only and ride along for serialization.
struct WeightedGraph {
  enum class Kind { WeightedAvg, Simple01, BernoulliScaled };

  int n = 0;
  Kind kind = Kind::WeightedAvg;
  double q_n = 1.0;
  std::uint64_t seed = 0;
  Matrix w;

  double max_weight() const;
  bool is_zero() const;
  long long edge_count() const;  // strict upper-triangle nonzeros
};

struct RandomGraphConfig {
  enum class NodeMode { Equispaced, UniformOrderStats };

  int n = 0;
  double q_n = 1.0;
  std::uint64_t seed = 1;
  NodeMode node_mode = NodeMode::UniformOrderStats;
};

// Cell-averaged kernel weights on the equispaced n-partition.
WeightedGraph deterministic_weighted(const Graphon& K, int n);

// {0,1} weights from the closed-support intersection test.
WeightedGraph simple_graph(const Graphon& K, int n);

// Equispaced breakpoints, or sorted i.i.d. Uniform[0,1] draws as the n-1
// interior breakpoints (stream "nodes" of cfg.seed).
Partition sample_nodes(const RandomGraphConfig& cfg);

// Entry (i,j) = min(cell-average of K over cell i x cell j, 1/q_n), zero
// diagonal.  Throws on empty cells (repeated breakpoints).
Matrix wedge_weights(const Graphon& K, const Partition& P, double q_n);

// Definition: nodes from sample_nodes, then each upper-triangle pair gets
// weight 1/q_n with probability q_n * wedge(i,j), else 0; mirrored, zero
// diagonal.  Edge randomness uses per-row substreams of stream "edges", so
// rows may be drawn in parallel.
WeightedGraph sample_inhomogeneous(const Graphon& K, const RandomGraphConfig& cfg);

struct Point2 {
  double x = 0.0;
  double y = 0.0;
};

// w_ij = exp(-dist(c_i, c_j)) when dist <= delta, else 0.
WeightedGraph coordinate_graph(const std::vector<Point2>& coords, double delta);

}  // namespace nlplap
