#pragma once

#include <cstddef>
#include <vector>

namespace nlplap {

// Dense square matrix, row-major.  Serves both as graph weight storage and as
// the dual edge field V; sizes stay at desk scale (a few thousand).
struct Matrix {
  int n = 0;
  std::vector<double> a;

  Matrix() = default;
  explicit Matrix(int n_) : n(n_), a(static_cast<std::size_t>(n_) * n_, 0.0) {}

  double& operator()(int i, int j) { return a[static_cast<std::size_t>(i) * n + j]; }
  double operator()(int i, int j) const { return a[static_cast<std::size_t>(i) * n + j]; }

  double* row(int i) { return a.data() + static_cast<std::size_t>(i) * n; }
  const double* row(int i) const { return a.data() + static_cast<std::size_t>(i) * n; }

  void fill(double v) { a.assign(a.size(), v); }
};

using DualField = Matrix;

}  // namespace nlplap
