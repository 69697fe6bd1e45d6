#include "prodlaw/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <queue>

#include "prodlaw/errors.hpp"

namespace prodlaw {

namespace {

GaussRule make_rule(int order) {
  GaussRule r;
  r.nodes.resize(order);
  r.weights.resize(order);
  for (int i = 0; i < order; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (order + 0.5));
    double dp = 0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1, p1 = x;
      for (int k = 2; k <= order; ++k) {
        double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = order * (x * p1 - p0) / (x * x - 1);
      double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    r.nodes[i] = x;
    r.weights[i] = 2 / ((1 - x * x) * dp * dp);
  }
  return r;
}

struct PanelLog {
  double a, b;
  std::vector<double> logs;  // log f at the 16 mapped nodes
};

}  // namespace

const GaussRule& gauss_legendre(int order) {
  static std::mutex mu;
  static std::map<int, std::unique_ptr<GaussRule>> cache;
  if (order < 1) throw DomainError("gauss_legendre: order must be >= 1");
  std::lock_guard lock(mu);
  auto& slot = cache[order];
  if (!slot) slot = std::make_unique<GaussRule>(make_rule(order));
  return *slot;
}

double integrate_gl(const std::function<double(double)>& f, double a, double b,
                    const GaussRule& rule) {
  const double h = 0.5 * (b - a), c = 0.5 * (a + b);
  double s = 0;
  for (std::size_t i = 0; i < rule.nodes.size(); ++i)
    s += rule.weights[i] * f(c + h * rule.nodes[i]);
  return s * h;
}

double integrate_log_positive(const std::function<double(double)>& log_f,
                              std::span<const double> breaks, double rel_tol,
                              int max_depth) {
  const GaussRule& g = gauss_legendre(16);
  const double ninf = -std::numeric_limits<double>::infinity();
  if (breaks.size() < 2) throw DomainError("integrate_log_positive: need >= 2 breaks");

  auto eval = [&](double a, double b) {
    std::vector<double> v(16);
    const double h = 0.5 * (b - a), c = 0.5 * (a + b);
    for (int i = 0; i < 16; ++i) v[i] = log_f(c + h * g.nodes[i]);
    return v;
  };
  auto sum_scaled = [&](double a, double b, const std::vector<double>& v,
                        double ref) {
    double s = 0;
    for (int i = 0; i < 16; ++i)
      if (v[i] > ninf) s += g.weights[i] * std::exp(v[i] - ref);
    return s * 0.5 * (b - a);
  };

  std::vector<PanelLog> init;
  double ref = ninf;
  for (std::size_t j = 0; j + 1 < breaks.size(); ++j) {
    if (!(breaks[j + 1] > breaks[j])) continue;
    PanelLog p{breaks[j], breaks[j + 1], eval(breaks[j], breaks[j + 1])};
    for (double l : p.logs) ref = std::max(ref, l);
    init.push_back(std::move(p));
  }
  if (ref == ninf) return ninf;

  // A new maximum far above `ref` means the first pass missed the peak:
  // rescale and start over.
  for (int restart = 0; restart < 8; ++restart) {
    double total0 = 0;
    for (auto& p : init) total0 += sum_scaled(p.a, p.b, p.logs, ref);
    struct Item {
      double a, b, whole;
      int depth;
    };
    std::vector<Item> stack;
    for (auto& p : init)
      stack.push_back({p.a, p.b, sum_scaled(p.a, p.b, p.logs, ref), 0});
    double acc = 0, comp = 0;
    double new_ref = ref;
    bool rescale = false;
    while (!stack.empty()) {
      Item it = stack.back();
      stack.pop_back();
      const double mid = 0.5 * (it.a + it.b);
      auto vl = eval(it.a, mid), vr = eval(mid, it.b);
      for (double l : vl) new_ref = std::max(new_ref, l);
      for (double l : vr) new_ref = std::max(new_ref, l);
      if (new_ref > ref + 300) {
        rescale = true;
        break;
      }
      const double l = sum_scaled(it.a, mid, vl, ref);
      const double r = sum_scaled(mid, it.b, vr, ref);
      const double both = l + r;
      const double err = std::abs(both - it.whole);
      if (err <= rel_tol * both || err <= 1e-3 * rel_tol * total0) {
        // Kahan sum: totals collect many panels of very different size.
        double y = both - comp;
        double t = acc + y;
        comp = (t - acc) - y;
        acc = t;
        continue;
      }
      if (it.depth + 1 >= max_depth)
        throw PrecisionError("integrate_log_positive: bisection depth exhausted");
      stack.push_back({it.a, mid, l, it.depth + 1});
      stack.push_back({mid, it.b, r, it.depth + 1});
    }
    if (!rescale) return acc > 0 ? ref + std::log(acc) : ninf;
    ref = new_ref;
  }
  throw PrecisionError("integrate_log_positive: integrand scale unstable");
}

double integrate_adaptive(const std::function<double(double)>& f, double a,
                          double b, double abs_tol, double rel_tol,
                          int max_depth) {
  if (a == b) return 0;
  const GaussRule& g = gauss_legendre(16);
  struct Panel {
    double a, b, value, err;
    int depth;
    bool operator<(const Panel& o) const { return err < o.err; }
  };
  auto make = [&](double lo, double hi, int depth) {
    const double whole = integrate_gl(f, lo, hi, g);
    const double mid = 0.5 * (lo + hi);
    const double halves = integrate_gl(f, lo, mid, g) + integrate_gl(f, mid, hi, g);
    return Panel{lo, hi, halves, std::abs(halves - whole), depth};
  };
  // Global strategy: always bisect the panel with the largest error, so an
  // endpoint singularity only refines where it lives.
  std::priority_queue<Panel> heap;
  heap.push(make(a, b, 0));
  double value = heap.top().value, err = heap.top().err, mass = std::abs(value);
  const double eps = std::numeric_limits<double>::epsilon();
  for (long iter = 1;; ++iter) {
    if (iter % 256 == 0) {
      // refresh the running sums against drift
      std::priority_queue<Panel> copy = heap;
      value = err = mass = 0;
      while (!copy.empty()) {
        value += copy.top().value;
        err += copy.top().err;
        mass += std::abs(copy.top().value);
        copy.pop();
      }
    }
    if (err <= std::max({abs_tol, rel_tol * std::abs(value), 64 * eps * mass})) return value;
    Panel p = heap.top();
    heap.pop();
    if (p.depth + 1 >= max_depth)
      throw PrecisionError("integrate_adaptive: bisection depth exhausted");
    const double mid = 0.5 * (p.a + p.b);
    const Panel l = make(p.a, mid, p.depth + 1), r = make(mid, p.b, p.depth + 1);
    value += l.value + r.value - p.value;
    err += l.err + r.err - p.err;
    mass += std::abs(l.value) + std::abs(r.value) - std::abs(p.value);
    heap.push(l);
    heap.push(r);
  }
}

}  // namespace prodlaw
