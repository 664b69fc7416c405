#pragma once

#include <functional>
#include <string>
#include <vector>

#include "nlplap/matrix.hpp"

namespace nlplap {

// Ordered breakpoints 0 = x[0] < x[1] < ... < x[n] = 1 defining n cells.
struct Partition {
  std::vector<double> x;

  static Partition equispaced(int n);
  // Validates monotonicity and the 0/1 endpoints.
  static Partition from_breakpoints(std::vector<double> bp);

  int cells() const { return static_cast<int>(x.size()) - 1; }
  double width(int i) const { return x[i + 1] - x[i]; }
  double max_spacing() const;
  // True only for partitions whose breakpoints are exactly i/n; gates the
  // translation-invariant fast path in project_kernel.
  bool is_equispaced() const;
};

// Step function: value[i] on [x[i], x[i+1]), last cell closed at 1.
struct PiecewiseConstantFn {
  Partition part;
  std::vector<double> value;

  double eval(double t) const;
};

// Symmetric bounded kernel on [0,1]^2.  The form tag unlocks exact formulas:
// band and constant kernels project without quadrature, and band/radial forms
// carry a support descriptor (half-width delta) for the simple-graph and
// boundary-cell operations.
class Graphon {
 public:
  enum class Form { General, Radial, Band, Constant };

  static Graphon constant(double c);
  static Graphon band(double delta);
  static Graphon radial(std::function<double(double)> profile, double delta, double bound);
  static Graphon radial_exp(double delta);
  static Graphon general(std::function<double(double, double)> f, double bound);

  double operator()(double x, double y) const;
  Form form() const { return form_; }
  double bound() const { return bound_; }
  // Band half-width / radial truncation radius; meaningless for other forms.
  double support_radius() const;
  bool has_support_descriptor() const {
    return form_ == Form::Band || form_ == Form::Radial || form_ == Form::Constant;
  }
  double constant_value() const { return param_; }
  const std::function<double(double)>& profile() const { return profile_; }

 private:
  Form form_ = Form::General;
  double bound_ = 1.0;
  double param_ = 0.0;  // band/radial: delta; constant: c
  std::function<double(double, double)> eval_;
  std::function<double(double)> profile_;
};

// Signal on [0,1] with a smoothness tag; step signals carry their exact
// breakpoints so projection avoids quadrature entirely.
struct ContinuumSignal {
  enum class Kind { PiecewiseConstant, Lipschitz, Generic };

  Kind kind = Kind::Generic;
  std::function<double(double)> eval;
  std::vector<double> breaks;  // PiecewiseConstant: full breakpoint list 0..1
  std::vector<double> levels;  // one per cell of `breaks`
  double lip_s = 0.0;          // Lipschitz: smoothness order
  double lip_c = 0.0;          // Lipschitz: constant

  static ContinuumSignal constant(double c);
  static ContinuumSignal step(std::vector<double> interior_breaks, std::vector<double> levels);
  static ContinuumSignal lipschitz(std::function<double(double)> f, double s, double c);
  static ContinuumSignal generic(std::function<double(double)> f);
};

// Cell averages of g over P; exact for step signals, adaptive quadrature
// (abs tol 1e-10 per cell) otherwise.
std::vector<double> project_signal(const ContinuumSignal& g, const Partition& P);

// Cell-pair averages of K over P x P. Exact for constant/band kernels; radial
// kernels reduce to a 1d integral split at the truncation radius, so the stated
// tolerance holds even though the kernel jumps there; general kernels use
// adaptive tensor quadrature (abs tol 1e-8) whose accuracy is only guaranteed
// for continuous integrands.
Matrix project_kernel(const Graphon& K, const Partition& P);

// {0,1} matrix: entry (i,j) = 1 iff the closed cell rectangle meets the
// closed support of K.  Analytic for band/radial/constant forms; for general
// kernels a 32x32 subsampling fallback runs and *heuristic is set.
Matrix project_kernel_simple(const Graphon& K, const Partition& P, bool* heuristic = nullptr);

PiecewiseConstantFn inject(const std::vector<double>& v, const Partition& P);

// Exact L2 distance on the merged breakpoint set; no quadrature error.
double l2_distance_pwc(const PiecewiseConstantFn& f, const PiecewiseConstantFn& h);

// Lq norm of a step function (q >= 1 or infinity), exact.
double lq_norm_pwc(const PiecewiseConstantFn& f, double q);

// ((1/n) sum |v_i|^q)^(1/q); max for q = infinity.  Throws for q < 1.
double discrete_norm(const std::vector<double>& v, double q, int n);

// Number of cells of the equispaced n x n mesh whose closed square meets the
// boundary of cl(supp K).  Requires a support descriptor.
long long boundary_cell_count(const Graphon& K, int n);

// Adaptive composite Gauss-Legendre (degree 8, dyadic refinement) to absolute
// tolerance abstol.
double integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                          double abstol);

// Config-style kernel/signal descriptions, e.g. "kind=band,delta=0.3",
// "kind=constant,c=1", "kind=radial-exp,delta=0.3"; signals additionally
// accept named presets ("steps5", "steps5u", "steps2", "ramp") and
// "kind=steps,breaks=0.2;0.5,levels=1;0;2".
Graphon parse_kernel_spec(const std::string& spec);
ContinuumSignal parse_signal_spec(const std::string& spec);

}  // namespace nlplap
