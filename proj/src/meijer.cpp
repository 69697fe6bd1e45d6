#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "prodlaw/errors.hpp"
#include "prodlaw/quadrature.hpp"
#include "prodlaw/specfun.hpp"

namespace prodlaw {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr double kTailLog = -46.0;      // auto truncation: e^-46 of the peak
constexpr double kUserTailLog = -39.0;  // explicit truncation must reach 1e-17
constexpr double kStirlingFrom = 30.0;
constexpr int kMaxLevel = 4;
constexpr std::size_t kMaxPanels = 200000;

// Real saddle of Gamma(s)^m x^{-s}: m psi(c) = log x.  Newton in log c.
double saddle_abscissa(double m, double lx) {
  const double r = lx / m;
  double c = r > 1 ? std::exp(r) + 0.5 : (r < -1 ? -1 / (r + 0.5772156649) : 1.0);
  if (!(c > 0)) c = 1e-3;
  double u = std::log(c);
  for (int it = 0; it < 100; ++it) {
    const double cc = std::exp(u);
    const double g = m * digamma(cc) - lx;
    const double dg = m * cc * trigamma(cc);
    double du = -g / dg;
    if (du > 2) du = 2;
    if (du < -2) du = -2;
    u += du;
    if (std::abs(du) < 1e-14) break;
  }
  return std::exp(u);
}

// Stirling remainder B(z) in log Gamma(z) = (z-1/2)log z - z + log(2pi)/2 + B(z).
cplx stirling_remainder(cplx z) {
  const cplx r = 1.0 / z, r2 = r * r;
  return r * (1.0 / 12 -
              r2 * (1.0 / 360 - r2 * (1.0 / 1260 - r2 * (1.0 / 1680 - r2 / 1188.0))));
}

struct Line {
  double m, lx, c, fc, lgc;
  bool stirling;
  double log_c;

  // f(c+iy) - f(c), f(s) = m log Gamma(s) - s log x.  `scale` receives the
  // magnitude of the terms cancelled inside the exponent (Lanczos route).
  cplx delta(double y, double* scale = nullptr) const {
    if (stirling) {
      const double q = y / c;
      const cplx L(0.5 * std::log1p(q * q), std::atan(q));
      const cplx iy(0, y);
      const cplx s(c, y);
      const cplx dB = stirling_remainder(s) - stirling_remainder(cplx(c, 0));
      if (scale) *scale = 0;
      return m * ((c - 0.5 + iy) * L - iy + dB) + iy * (m * log_c - lx);
    }
    const cplx lg = log_gamma(cplx(c, y));
    if (scale) *scale = m * (std::abs(lg) + std::abs(lgc)) + std::abs(y * lx);
    return m * (lg - lgc) - cplx(0, y * lx);
  }
};

struct LevelSum {
  double J = 0, L1 = 0, floor = 0;
};

LevelSum evaluate(const Line& ln, const std::vector<double>& edges, int level,
                  std::vector<QuadratureNode>* dump) {
  const GaussRule& g = gauss_legendre(16);
  const int sub = 1 << level;
  LevelSum s;
  for (std::size_t j = 0; j + 1 < edges.size(); ++j) {
    const double h = (edges[j + 1] - edges[j]) / sub;
    for (int p = 0; p < sub; ++p) {
      const double a = edges[j] + p * h;
      for (int i = 0; i < 16; ++i) {
        const double y = a + 0.5 * h * (1 + g.nodes[i]);
        const double w = 0.5 * h * g.weights[i];
        double scale;
        const cplx d = ln.delta(y, &scale);
        const double mag = std::exp(d.real());
        const double term = mag * std::cos(d.imag());
        s.J += w * term;
        s.L1 += w * mag;
        s.floor += w * mag * kEps * (64 + 4 * (std::abs(d) + scale));
        if (dump) dump->push_back({ln.c, y, w, ln.fc + d.real()});
      }
    }
  }
  return s;
}

struct Plan {
  Line line;
  std::vector<double> edges;
};

Plan make_plan(double x, const MeijerWeight& w) {
  if (!(x > 0) || !std::isfinite(x))
    throw DomainError("meijer_g_log: x must be positive and finite, got " + std::to_string(x));
  if (!(w.m > 0)) throw DomainError("meijer_g_log: m must be positive");
  if (w.contour_abscissa < 0 || w.im_truncation < 0)
    throw DomainError("meijer_g_log: abscissa and truncation must be positive (0 = auto)");
  if (w.panels < 8) throw DomainError("meijer_g_log: panels must be >= 8");

  Plan p;
  Line& ln = p.line;
  ln.m = w.m;
  ln.lx = std::log(x);
  ln.c = w.contour_abscissa > 0 ? w.contour_abscissa : saddle_abscissa(w.m, ln.lx);
  ln.lgc = log_gamma(cplx(ln.c, 0)).real();
  ln.fc = w.m * std::lgamma(ln.c) - ln.c * ln.lx;
  ln.stirling = ln.c >= kStirlingFrom;
  ln.log_c = std::log(ln.c);

  const double sigma = 1 / std::sqrt(w.m * trigamma(ln.c));
  const double w_core = 10 * sigma / w.panels;
  const bool user_cut = w.im_truncation > 0;
  p.edges.push_back(0);
  double y = 0;
  for (;;) {
    const cplx psi = digamma(cplx(ln.c, y));
    const double omega = std::abs(w.m * psi.real() - ln.lx);
    const double kappa = w.m * psi.imag();
    double width = std::max(w_core, 0.5 * y);
    if (omega > 0) width = std::min(width, 8 / omega);
    if (kappa > 0) width = std::min(width, 8 / kappa);
    y += width;
    if (user_cut && y >= w.im_truncation) {
      p.edges.push_back(w.im_truncation);
      if (ln.delta(w.im_truncation).real() > kUserTailLog)
        throw PrecisionError("meijer_g_log: im_truncation too short for x = " +
                             std::to_string(x));
      break;
    }
    p.edges.push_back(y);
    if (!user_cut && ln.delta(y).real() < kTailLog) break;
    if (p.edges.size() > kMaxPanels)
      throw PrecisionError("meijer_g_log: panel budget exhausted");
  }
  return p;
}

}  // namespace

SignedLog meijer_g_log(double x, const MeijerWeight& w) {
  const Plan p = make_plan(x, w);
  LevelSum prev = evaluate(p.line, p.edges, 0, nullptr);
  for (int level = 1; level <= kMaxLevel; ++level) {
    const LevelSum cur = evaluate(p.line, p.edges, level, nullptr);
    const double tol = 1e-10 * std::abs(cur.J) + cur.floor;
    if (std::abs(cur.J - prev.J) <= tol) {
      if (!(cur.J > 0))
        throw PrecisionError("meijer_g_log: nonpositive weight at x = " + std::to_string(x));
      if (cur.floor > 1e-9 * cur.J)
        throw PrecisionError("meijer_g_log: cancellation on the chosen line, x = " +
                             std::to_string(x));
      return {p.line.fc + std::log(cur.J / std::numbers::pi), 1};
    }
    prev = cur;
  }
  throw PrecisionError("meijer_g_log: refinement levels disagree at x = " + std::to_string(x));
}

std::vector<QuadratureNode> meijer_g_nodes(double x, const MeijerWeight& w) {
  const Plan p = make_plan(x, w);
  std::vector<QuadratureNode> nodes;
  evaluate(p.line, p.edges, 1, &nodes);
  return nodes;
}

double meijer_g(double x, const MeijerWeight& w) {
  const SignedLog g = meijer_g_log(x, w);
  return g.sign * std::exp(g.log_magnitude);
}

}  // namespace prodlaw
