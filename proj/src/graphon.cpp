#include "nlplap/graphon.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <sstream>
#include <stdexcept>
#include <utility>

namespace nlplap {

namespace {

constexpr double kSignalQuadTol = 1e-10;
constexpr double kKernelQuadTol = 1e-8;

// Gauss-Legendre degree 8 on [-1,1].
constexpr double kGlx[4] = {0.1834346424956498, 0.5255324099163290,
                            0.7966664774136267, 0.9602898564975363};
constexpr double kGlw[4] = {0.3626837833783620, 0.3137066458778873,
                            0.2223810344533745, 0.1012285362903763};

double gl8(const std::function<double(double)>& f, double a, double b) {
  const double c = 0.5 * (a + b);
  const double h = 0.5 * (b - a);
  double s = 0.0;
  for (int k = 0; k < 4; ++k) {
    s += kGlw[k] * (f(c - h * kGlx[k]) + f(c + h * kGlx[k]));
  }
  return s * h;
}

double integrate_rec(const std::function<double(double)>& f, double a, double b,
                     double abstol, double whole, int depth) {
  const double m = 0.5 * (a + b);
  const double left = gl8(f, a, m);
  const double right = gl8(f, m, b);
  const double refined = left + right;
  if (depth >= 30 || std::abs(refined - whole) <= abstol) {
    return refined;
  }
  return integrate_rec(f, a, m, 0.5 * abstol, left, depth + 1) +
         integrate_rec(f, m, b, 0.5 * abstol, right, depth + 1);
}

}  // namespace

double integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                          double abstol) {
  if (!(b > a)) return 0.0;
  return integrate_rec(f, a, b, abstol, gl8(f, a, b), 0);
}

Partition Partition::equispaced(int n) {
  if (n < 1) throw std::invalid_argument("partition size must be >= 1");
  Partition p;
  p.x.resize(n + 1);
  for (int i = 0; i <= n; ++i) p.x[i] = static_cast<double>(i) / n;
  return p;
}

Partition Partition::from_breakpoints(std::vector<double> bp) {
  if (bp.size() < 2 || bp.front() != 0.0 || bp.back() != 1.0) {
    throw std::invalid_argument("breakpoints must run from 0 to 1");
  }
  for (std::size_t i = 1; i < bp.size(); ++i) {
    if (!(bp[i] > bp[i - 1])) {
      throw std::invalid_argument("breakpoints must be strictly increasing");
    }
  }
  Partition p;
  p.x = std::move(bp);
  return p;
}

double Partition::max_spacing() const {
  double m = 0.0;
  for (int i = 0; i < cells(); ++i) m = std::max(m, width(i));
  return m;
}

bool Partition::is_equispaced() const {
  const int n = cells();
  for (int i = 0; i <= n; ++i) {
    if (x[i] != static_cast<double>(i) / n) return false;
  }
  return true;
}

double PiecewiseConstantFn::eval(double t) const {
  t = std::clamp(t, 0.0, 1.0);
  const auto it = std::upper_bound(part.x.begin(), part.x.end(), t);
  int i = static_cast<int>(it - part.x.begin()) - 1;
  i = std::clamp(i, 0, part.cells() - 1);
  return value[i];
}

Graphon Graphon::constant(double c) {
  if (!(c >= 0.0)) throw std::invalid_argument("constant kernel level must be >= 0");
  Graphon k;
  k.form_ = Form::Constant;
  k.bound_ = c;
  k.param_ = c;
  k.eval_ = [c](double, double) { return c; };
  return k;
}

Graphon Graphon::band(double delta) {
  if (!(delta > 0.0)) throw std::invalid_argument("band half-width must be > 0");
  Graphon k;
  k.form_ = Form::Band;
  k.bound_ = 1.0;
  k.param_ = delta;
  k.eval_ = [delta](double x, double y) { return std::abs(x - y) <= delta ? 1.0 : 0.0; };
  return k;
}

Graphon Graphon::radial(std::function<double(double)> profile, double delta, double bound) {
  if (!(delta > 0.0)) throw std::invalid_argument("radial truncation radius must be > 0");
  Graphon k;
  k.form_ = Form::Radial;
  k.bound_ = bound;
  k.param_ = delta;
  k.profile_ = std::move(profile);
  auto prof = k.profile_;
  k.eval_ = [prof, delta](double x, double y) {
    const double r = std::abs(x - y);
    return r <= delta ? prof(r) : 0.0;
  };
  return k;
}

Graphon Graphon::radial_exp(double delta) {
  return radial([](double r) { return std::exp(-r); }, delta, 1.0);
}

Graphon Graphon::general(std::function<double(double, double)> f, double bound) {
  Graphon k;
  k.form_ = Form::General;
  k.bound_ = bound;
  k.eval_ = std::move(f);
  return k;
}

double Graphon::operator()(double x, double y) const { return eval_(x, y); }

double Graphon::support_radius() const {
  if (form_ != Form::Band && form_ != Form::Radial) {
    throw std::invalid_argument("kernel has no radial support descriptor");
  }
  return param_;
}

ContinuumSignal ContinuumSignal::constant(double c) {
  return step({}, {c});
}

ContinuumSignal ContinuumSignal::step(std::vector<double> interior_breaks,
                                      std::vector<double> levels) {
  if (levels.size() != interior_breaks.size() + 1) {
    throw std::invalid_argument("step signal needs one more level than interior breakpoints");
  }
  std::vector<double> full;
  full.reserve(interior_breaks.size() + 2);
  full.push_back(0.0);
  for (double b : interior_breaks) {
    if (!(b > full.back() && b < 1.0)) {
      throw std::invalid_argument("step breakpoints must be strictly increasing inside (0,1)");
    }
    full.push_back(b);
  }
  full.push_back(1.0);
  ContinuumSignal s;
  s.kind = Kind::PiecewiseConstant;
  s.breaks = std::move(full);
  s.levels = std::move(levels);
  auto breaks = s.breaks;
  auto lv = s.levels;
  s.eval = [breaks, lv](double t) {
    t = std::clamp(t, 0.0, 1.0);
    auto it = std::upper_bound(breaks.begin(), breaks.end(), t);
    int i = static_cast<int>(it - breaks.begin()) - 1;
    i = std::clamp(i, 0, static_cast<int>(lv.size()) - 1);
    return lv[i];
  };
  return s;
}

ContinuumSignal ContinuumSignal::lipschitz(std::function<double(double)> f, double s, double c) {
  ContinuumSignal g;
  g.kind = Kind::Lipschitz;
  g.eval = std::move(f);
  g.lip_s = s;
  g.lip_c = c;
  return g;
}

ContinuumSignal ContinuumSignal::generic(std::function<double(double)> f) {
  ContinuumSignal g;
  g.kind = Kind::Generic;
  g.eval = std::move(f);
  return g;
}

std::vector<double> project_signal(const ContinuumSignal& g, const Partition& P) {
  const int n = P.cells();
  std::vector<double> out(n);
  if (g.kind == ContinuumSignal::Kind::PiecewiseConstant) {
    for (int i = 0; i < n; ++i) {
      const double a = P.x[i], b = P.x[i + 1];
      double acc = 0.0;
      for (std::size_t j = 0; j + 1 < g.breaks.size(); ++j) {
        const double lo = std::max(a, g.breaks[j]);
        const double hi = std::min(b, g.breaks[j + 1]);
        if (hi > lo) acc += g.levels[j] * (hi - lo);
      }
      out[i] = acc / (b - a);
    }
  } else {
    for (int i = 0; i < n; ++i) {
      const double a = P.x[i], b = P.x[i + 1];
      out[i] = integrate_adaptive(g.eval, a, b, kSignalQuadTol * (b - a)) / (b - a);
    }
  }
  for (double v : out) {
    if (!std::isfinite(v)) throw std::domain_error("signal evaluation produced a non-finite value");
  }
  return out;
}

namespace {

// Average of 1{|x-y| <= delta} over [a,b] x [c,d]: the overlap length
// h(x) = max(0, min(x+delta, d) - max(x-delta, c)) is piecewise linear with
// kinks only at x in {c-delta, d-delta, c+delta, d+delta}, so trapezoid
// integration between consecutive kinks is exact.
double band_cell_average(double delta, double a, double b, double c, double d) {
  auto h = [&](double x) {
    return std::max(0.0, std::min(x + delta, d) - std::max(x - delta, c));
  };
  double knots[6] = {a, b, c - delta, d - delta, c + delta, d + delta};
  std::sort(knots, knots + 6);
  double acc = 0.0;
  for (int k = 0; k < 5; ++k) {
    const double lo = std::clamp(knots[k], a, b);
    const double hi = std::clamp(knots[k + 1], a, b);
    if (hi > lo) acc += 0.5 * (h(lo) + h(hi)) * (hi - lo);
  }
  return acc / ((b - a) * (d - c));
}

double cell_average_quad(const Graphon& K, double a, double b, double c, double d) {
  const double area = (b - a) * (d - c);
  const double inner_tol = 0.25 * kKernelQuadTol * (d - c);
  auto inner = [&](double x) {
    return integrate_adaptive([&](double y) { return K(x, y); }, c, d, inner_tol);
  };
  return integrate_adaptive(inner, a, b, 0.5 * kKernelQuadTol * area) / area;
}

// Average of profile(|y-x|) 1{|y-x| <= delta} over [a,b] x [c,d], reduced by
// translation invariance to 1d: the double integral equals
//   int F(s) L(s) ds,  L(s) = max(0, min(b, d-s) - max(a, c-s)),
// with s = y - x. L is piecewise linear with kinks at {c-a, c-b, d-a, d-b} and
// F is smooth away from {-delta, 0, delta}, so splitting at those points leaves
// a smooth integrand on every subsegment.
double radial_cell_average(const std::function<double(double)>& profile, double delta,
                           double a, double b, double c, double d) {
  const double lo = std::max(c - b, -delta);
  const double hi = std::min(d - a, delta);
  if (!(hi > lo)) return 0.0;
  double knots[7] = {lo, hi, c - a, d - b, -delta, 0.0, delta};
  std::sort(knots, knots + 7);
  auto f = [&](double s) {
    const double len = std::min(b, d - s) - std::max(a, c - s);
    return len > 0.0 ? profile(std::abs(s)) * len : 0.0;
  };
  const double area = (b - a) * (d - c);
  double acc = 0.0;
  for (int k = 0; k < 6; ++k) {
    const double sl = std::clamp(knots[k], lo, hi);
    const double sh = std::clamp(knots[k + 1], lo, hi);
    if (sh > sl) {
      acc += integrate_adaptive(f, sl, sh, kKernelQuadTol * area * (sh - sl) / (hi - lo));
    }
  }
  return acc / area;
}

}  // namespace

Matrix project_kernel(const Graphon& K, const Partition& P) {
  const int n = P.cells();
  Matrix m(n);
  switch (K.form()) {
    case Graphon::Form::Constant:
      m.fill(K.constant_value());
      return m;
    case Graphon::Form::Band: {
      const double delta = K.support_radius();
      for (int i = 0; i < n; ++i) {
        for (int j = i; j < n; ++j) {
          const double v = band_cell_average(delta, P.x[i], P.x[i + 1], P.x[j], P.x[j + 1]);
          m(i, j) = v;
          m(j, i) = v;
        }
      }
      return m;
    }
    case Graphon::Form::Radial: {
      const double delta = K.support_radius();
      const auto& prof = K.profile();
      if (P.is_equispaced()) {
        // Translation invariance: the average depends on |i-j| only.
        std::vector<double> by_off(n);
        const double h = 1.0 / n;
        for (int k = 0; k < n; ++k) {
          by_off[k] = radial_cell_average(prof, delta, 0.0, h, k * h, (k + 1) * h);
        }
        for (int i = 0; i < n; ++i) {
          for (int j = 0; j < n; ++j) m(i, j) = by_off[std::abs(i - j)];
        }
        return m;
      }
      for (int i = 0; i < n; ++i) {
        for (int j = i; j < n; ++j) {
          const double v =
              radial_cell_average(prof, delta, P.x[i], P.x[i + 1], P.x[j], P.x[j + 1]);
          m(i, j) = v;
          m(j, i) = v;
        }
      }
      return m;
    }
    case Graphon::Form::General:
      for (int i = 0; i < n; ++i) {
        for (int j = i; j < n; ++j) {
          const double v = cell_average_quad(K, P.x[i], P.x[i + 1], P.x[j], P.x[j + 1]);
          m(i, j) = v;
          m(j, i) = v;
        }
      }
      return m;
  }
  throw std::logic_error("unreachable kernel form");
}

Matrix project_kernel_simple(const Graphon& K, const Partition& P, bool* heuristic) {
  const int n = P.cells();
  if (heuristic) *heuristic = false;
  Matrix m(n);
  if (K.form() == Graphon::Form::Constant) {
    if (K.constant_value() > 0.0) m.fill(1.0);
    return m;
  }
  if (K.form() == Graphon::Form::Band || K.form() == Graphon::Form::Radial) {
    const double delta = K.support_radius();
    for (int i = 0; i < n; ++i) {
      for (int j = i; j < n; ++j) {
        // Minimal |x-y| over the closed rectangle; 0 when the intervals meet.
        const double gap = std::max({0.0, P.x[j] - P.x[i + 1], P.x[i] - P.x[j + 1]});
        const double v = gap <= delta ? 1.0 : 0.0;
        m(i, j) = v;
        m(j, i) = v;
      }
    }
    return m;
  }
  // General kernel: closed-support membership is undecidable from samples;
  // flag the 32x32 subsampling answer as heuristic.
  if (heuristic) *heuristic = true;
  constexpr int kSamples = 32;
  for (int i = 0; i < n; ++i) {
    for (int j = i; j < n; ++j) {
      double v = 0.0;
      for (int si = 0; si < kSamples && v == 0.0; ++si) {
        const double x = P.x[i] + (P.x[i + 1] - P.x[i]) * si / (kSamples - 1.0);
        for (int sj = 0; sj < kSamples; ++sj) {
          const double y = P.x[j] + (P.x[j + 1] - P.x[j]) * sj / (kSamples - 1.0);
          if (K(x, y) > 0.0) {
            v = 1.0;
            break;
          }
        }
      }
      m(i, j) = v;
      m(j, i) = v;
    }
  }
  return m;
}

PiecewiseConstantFn inject(const std::vector<double>& v, const Partition& P) {
  if (static_cast<int>(v.size()) != P.cells()) {
    throw std::invalid_argument("value count does not match partition cells");
  }
  return PiecewiseConstantFn{P, v};
}

double l2_distance_pwc(const PiecewiseConstantFn& f, const PiecewiseConstantFn& h) {
  const int nf = f.part.cells();
  const int nh = h.part.cells();
  int i = 0, j = 0;
  double pos = 0.0, acc = 0.0;
  while (pos < 1.0) {
    const double fe = f.part.x[i + 1];
    const double he = h.part.x[j + 1];
    const double nxt = std::min(fe, he);
    const double d = f.value[i] - h.value[j];
    acc += d * d * (nxt - pos);
    pos = nxt;
    if (fe == nxt && i + 1 < nf) ++i;
    if (he == nxt && j + 1 < nh) ++j;
  }
  return std::sqrt(acc);
}

double lq_norm_pwc(const PiecewiseConstantFn& f, double q) {
  if (std::isinf(q)) {
    double m = 0.0;
    for (double v : f.value) m = std::max(m, std::abs(v));
    return m;
  }
  if (!(q >= 1.0)) throw std::invalid_argument("norm exponent must be >= 1");
  double acc = 0.0;
  for (int i = 0; i < f.part.cells(); ++i) {
    acc += std::pow(std::abs(f.value[i]), q) * f.part.width(i);
  }
  return std::pow(acc, 1.0 / q);
}

double discrete_norm(const std::vector<double>& v, double q, int n) {
  if (static_cast<int>(v.size()) != n) {
    throw std::invalid_argument("vector length does not match n");
  }
  if (std::isinf(q)) {
    double m = 0.0;
    for (double t : v) m = std::max(m, std::abs(t));
    return m;
  }
  if (!(q >= 1.0)) throw std::invalid_argument("norm exponent must be >= 1");
  double acc = 0.0;
  for (double t : v) acc += std::pow(std::abs(t), q);
  return std::pow(acc / n, 1.0 / q);
}

long long boundary_cell_count(const Graphon& K, int n) {
  if (K.form() == Graphon::Form::Constant) return 0;
  if (K.form() != Graphon::Form::Band && K.form() != Graphon::Form::Radial) {
    throw std::invalid_argument("boundary cells need a band/radial support descriptor");
  }
  const double delta = K.support_radius();
  if (delta >= 1.0) return 0;  // support closure fills the square
  long long count = 0;
  const double h = 1.0 / n;
  for (int i = 0; i < n; ++i) {
    const double a = i * h, b = a + h;
    for (int j = 0; j < n; ++j) {
      const double c = j * h, d = c + h;
      // Closed cell meets the line y = x - delta or y = x + delta.
      const bool lower = (a - delta <= d) && (c <= b - delta);
      const bool upper = (a + delta <= d) && (c <= b + delta);
      if (lower || upper) ++count;
    }
  }
  return count;
}

namespace {

std::map<std::string, std::string> parse_kv(const std::string& spec) {
  std::map<std::string, std::string> kv;
  std::stringstream ss(spec);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto eq = item.find('=');
    if (eq == std::string::npos) {
      throw std::invalid_argument("malformed spec item '" + item + "' in '" + spec + "'");
    }
    auto trim = [](std::string s) {
      const auto b = s.find_first_not_of(" \t");
      const auto e = s.find_last_not_of(" \t");
      return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
    };
    kv[trim(item.substr(0, eq))] = trim(item.substr(eq + 1));
  }
  return kv;
}

double kv_num(const std::map<std::string, std::string>& kv, const std::string& key,
              const std::string& spec) {
  const auto it = kv.find(key);
  if (it == kv.end()) {
    throw std::invalid_argument("spec '" + spec + "' is missing '" + key + "'");
  }
  return std::stod(it->second);
}

std::vector<double> split_nums(const std::string& s) {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ';')) out.push_back(std::stod(item));
  return out;
}

}  // namespace

Graphon parse_kernel_spec(const std::string& spec) {
  const auto kv = parse_kv(spec);
  const auto it = kv.find("kind");
  if (it == kv.end()) throw std::invalid_argument("kernel spec '" + spec + "' is missing 'kind'");
  const std::string& kind = it->second;
  if (kind == "constant") {
    return Graphon::constant(kv.count("c") ? kv_num(kv, "c", spec) : 1.0);
  }
  if (kind == "band") {
    return Graphon::band(kv_num(kv, "delta", spec));
  }
  if (kind == "radial-exp") {
    return Graphon::radial_exp(kv_num(kv, "delta", spec));
  }
  throw std::invalid_argument("unknown kernel kind '" + kind + "'");
}

ContinuumSignal parse_signal_spec(const std::string& spec) {
  // Named presets; breakpoints deliberately avoid grid alignment so that
  // projection errors stay generic across the mesh sizes used in tests.
  if (spec == "steps5") {
    return ContinuumSignal::step({0.2137, 0.4213, 0.5871, 0.7793}, {2, 5, 1, 4, 3});
  }
  if (spec == "steps5u") {
    return ContinuumSignal::step({0.2137, 0.4213, 0.5871, 0.7793}, {0.4, 1.0, 0.2, 0.8, 0.6});
  }
  if (spec == "steps2") {
    return ContinuumSignal::step({0.5}, {0.0, 1.0});
  }
  if (spec == "ramp") {
    return ContinuumSignal::lipschitz([](double x) { return x; }, 1.0, 1.0);
  }
  const auto kv = parse_kv(spec);
  const auto it = kv.find("kind");
  if (it == kv.end()) throw std::invalid_argument("signal spec '" + spec + "' is missing 'kind'");
  const std::string& kind = it->second;
  if (kind == "constant") {
    return ContinuumSignal::constant(kv.count("c") ? kv_num(kv, "c", spec) : 0.0);
  }
  if (kind == "steps") {
    const auto bit = kv.find("breaks");
    const auto lit = kv.find("levels");
    if (bit == kv.end() || lit == kv.end()) {
      throw std::invalid_argument("steps signal needs 'breaks' and 'levels'");
    }
    return ContinuumSignal::step(split_nums(bit->second), split_nums(lit->second));
  }
  if (kind == "ramp") {
    return ContinuumSignal::lipschitz([](double x) { return x; }, 1.0, 1.0);
  }
  throw std::invalid_argument("unknown signal kind '" + kind + "'");
}

}  // namespace nlplap
