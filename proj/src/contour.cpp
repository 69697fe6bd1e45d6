#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "prodlaw/errors.hpp"
#include "prodlaw/quadrature.hpp"
#include "prodlaw/specfun.hpp"

namespace prodlaw {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kAutoTail = -40.0;
constexpr double kUserTail = -39.0;
constexpr int kMaxLevel = 3;

// cot(pi t) without overflow of sin/cos for |Im t| of order one or larger.
cplx cot_pi(cplx t) {
  const cplx z = kPi * t;
  const cplx i(0, 1);
  if (z.imag() > 0) {
    const cplx q = std::exp(2.0 * i * z);
    return i * (q + 1.0) / (q - 1.0);
  }
  if (z.imag() < 0) {
    const cplx q = std::exp(-2.0 * i * z);
    return i * (1.0 + q) / (1.0 - q);
  }
  return std::cos(z.real()) / std::sin(z.real());
}

double dist_to_integer(double x) { return std::abs(x - std::round(x)); }

struct Problem {
  double m, lX, eta, f_ref;
  cplx f(cplx s) const { return m * log_gamma(s) - s * lX; }
};

struct Rect {
  double left, right, h;
};

// Nodes (t, dt) of a counterclockwise rectangle, GL16 on panels of length <= len.
void rect_nodes(const Rect& r, double len, std::vector<cplx>& t, std::vector<cplx>& dt) {
  const GaussRule& g = gauss_legendre(16);
  const cplx corners[5] = {{r.left, -r.h}, {r.right, -r.h}, {r.right, r.h}, {r.left, r.h},
                           {r.left, -r.h}};
  for (int e = 0; e < 4; ++e) {
    const cplx a = corners[e], b = corners[e + 1];
    const int np = std::max(1, int(std::ceil(std::abs(b - a) / len)));
    const cplx step = (b - a) / double(np);
    for (int p = 0; p < np; ++p) {
      const cplx pa = a + double(p) * step;
      for (int i = 0; i < 16; ++i) {
        t.push_back(pa + 0.5 * (1 + g.nodes[i]) * step);
        dt.push_back(0.5 * g.weights[i] * step);
      }
    }
  }
}

struct LineNodes {
  std::vector<cplx> s;
  std::vector<cplx> w;  // e^{f(s) - f_ref} * i dy
};

std::vector<double> line_edges(const Problem& pb, double truncation) {
  std::vector<double> edges{0};
  double y = 0;
  for (;;) {
    double width = y < 2 ? 0.125 : 0.25 * y;
    const cplx psi = digamma(cplx(pb.eta, y));
    const double omega = std::abs(pb.m * psi.real() - pb.lX);
    const double kappa = pb.m * psi.imag();
    if (omega > 0) width = std::min(width, 8 / omega);
    if (kappa > 0) width = std::min(width, 8 / kappa);
    y += width;
    if (truncation > 0 && y >= truncation) {
      edges.push_back(truncation);
      if ((pb.f(cplx(pb.eta, truncation)).real() - pb.f_ref) > kUserTail)
        throw PrecisionError("mean_ball_measure_contour: vertical truncation too short");
      return edges;
    }
    edges.push_back(y);
    if (truncation <= 0 && pb.f(cplx(pb.eta, y)).real() - pb.f_ref < kAutoTail) return edges;
    if (edges.size() > 100000)
      throw PrecisionError("mean_ball_measure_contour: line panel budget exhausted");
  }
}

LineNodes line_nodes(const Problem& pb, const std::vector<double>& edges, int level) {
  const GaussRule& g = gauss_legendre(16);
  const int sub = 1 << level;
  LineNodes ln;
  for (std::size_t j = 0; j + 1 < edges.size(); ++j) {
    const double h = (edges[j + 1] - edges[j]) / sub;
    for (int p = 0; p < sub; ++p) {
      const double a = edges[j] + p * h;
      for (int i = 0; i < 16; ++i) {
        const double y = a + 0.5 * h * (1 + g.nodes[i]);
        const double w = 0.5 * h * g.weights[i];
        for (double sy : {y, -y}) {
          const cplx s(pb.eta, sy);
          ln.s.push_back(s);
          ln.w.push_back(std::exp(pb.f(s) - pb.f_ref) * cplx(0, w));
        }
      }
    }
  }
  return ln;
}

double contour_sum(const Problem& pb, const std::vector<Rect>& rects, double panel_len,
                   const LineNodes& ln) {
  cplx acc = 0;
  for (const Rect& r : rects) {
    std::vector<cplx> t, dt;
    rect_nodes(r, panel_len, t, dt);
    for (std::size_t a = 0; a < t.size(); ++a) {
      cplx inner = 0;
      for (std::size_t b = 0; b < ln.s.size(); ++b) inner += ln.w[b] / (t[a] - ln.s[b]);
      acc += cot_pi(t[a]) * std::exp(pb.f_ref - pb.f(t[a])) * inner * dt[a];
    }
  }
  return acc.real();
}

}  // namespace

double mean_ball_measure_contour(double R, int n, double m, const ContourConfig& cfg) {
  if (!(R > 0) || !std::isfinite(R)) throw DomainError("mean_ball_measure_contour: R must be positive");
  if (n < 1) throw DomainError("mean_ball_measure_contour: n must be >= 1");
  if (!(m >= 1)) throw DomainError("mean_ball_measure_contour: m must be >= 1");
  if (!(cfg.rect_half_height >= 0.25))
    throw DomainError("contour: rectangle half-height must be >= 1/4");
  if (!(cfg.panel_density >= 1)) throw DomainError("contour: panel density must be >= 1");
  const double right = n + cfg.rect_right_offset;
  if (!(cfg.rect_left < 1) || !(right > n))
    throw DomainError("contour: rectangle must enclose the poles 1..n");
  if (dist_to_integer(cfg.rect_left) < 0.25 - 1e-12 || dist_to_integer(right) < 0.25 - 1e-12)
    throw DomainError("contour: rectangle edge within 1/4 of an integer");

  Problem pb;
  pb.m = m;
  pb.lX = m * std::log(double(n)) + 2 * std::log(R);
  int K = 0;
  if (cfg.shift_vertical) {
    const double t0 = n * std::exp((2.0 / m) * std::log(R));
    K = int(std::clamp(std::floor(t0), 0.0, double(n)));
    pb.eta = K + 0.5;
  } else {
    pb.eta = cfg.vertical_abscissa;
    if (!(pb.eta > 0)) throw DomainError("contour: vertical abscissa must be positive");
    if (cfg.rect_left - pb.eta < 0.25 - 1e-12)
      throw DomainError("contour: vertical line closer than 1/4 to the rectangle");
  }
  pb.f_ref = pb.f(cplx(pb.eta, 0)).real();

  std::vector<Rect> rects;
  const double h = cfg.rect_half_height;
  if (cfg.shift_vertical) {
    if (K >= 1) rects.push_back({cfg.rect_left, K + 0.25, h});
    if (K <= n - 1) rects.push_back({K + 0.75, right, h});
  } else {
    rects.push_back({cfg.rect_left, right, h});
  }

  const std::vector<double> edges = line_edges(pb, cfg.vertical_truncation);
  const double base_len = 1.0 / cfg.panel_density;
  double prev = 0;
  for (int level = 0; level <= kMaxLevel; ++level) {
    const LineNodes ln = line_nodes(pb, edges, level);
    const double integral = contour_sum(pb, rects, base_len / (1 << level), ln);
    const double v = double(K) / n - integral / (4 * kPi * n);
    if (level > 0 && std::abs(v - prev) <= 1e-9 * std::max(std::abs(v), 1e-3)) return v;
    prev = v;
  }
  throw PrecisionError("mean_ball_measure_contour: refinement levels disagree (n = " +
                       std::to_string(n) + ", R = " + std::to_string(R) + ")");
}

}  // namespace prodlaw
