#include "prodlaw/limits.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>

#include <Eigen/Eigenvalues>

#include "prodlaw/errors.hpp"
#include "prodlaw/quadrature.hpp"

namespace prodlaw {

namespace {

constexpr double kPi = std::numbers::pi;

void check_m(double m) {
  if (!(m > 0)) throw DomainError("limit law: m must be positive");
}

std::array<cplx, 3> cubic_roots(cplx z, cplx w) {
  // s^3 + 2w s^2 + (w^2 - |z|^2 + 1) s + w
  const cplx a2 = 2.0 * w, a1 = w * w - std::norm(z) + 1.0, a0 = w;
  Eigen::Matrix3cd C = Eigen::Matrix3cd::Zero();
  C(0, 2) = -a0;
  C(1, 2) = -a1;
  C(2, 2) = -a2;
  C(1, 0) = 1;
  C(2, 1) = 1;
  Eigen::ComplexEigenSolver<Eigen::Matrix3cd> es(C, false);
  std::array<cplx, 3> r;
  for (int i = 0; i < 3; ++i) {
    cplx s = es.eigenvalues()(i);
    for (int it = 0; it < 3; ++it) {
      const cplx p = ((s + a2) * s + a1) * s + a0;
      const cplx dp = (3.0 * s + 2.0 * a2) * s + a1;
      if (std::abs(dp) == 0) break;
      s -= p / dp;
    }
    r[i] = s;
  }
  return r;
}

}  // namespace

double limit_density(cplx z, double m) {
  check_m(m);
  const double r = std::abs(z);
  if (r >= 1) return 0;
  return std::pow(r, 2 / m - 2) / (kPi * m);
}

double limit_ball_measure(cplx z0, double R, double m) {
  check_m(m);
  if (!(R > 0)) throw DomainError("limit_ball_measure: R must be positive");
  const double d = std::abs(z0);
  if (d == 0) return std::min(std::pow(R, 2 / m), 1.0);
  double full = 0;
  if (R > d) full = std::pow(std::min(R - d, 1.0), 2 / m);
  const double lo = std::abs(d - R);
  const double hi = std::min(d + R, 1.0);
  if (!(hi > lo)) return full;
  // theta(r): angle of the circle |z| = r inside B_R(z0); r = mid - half cos(phi)
  // removes the square-root endpoint behaviour.
  const double mid = 0.5 * (lo + hi), half = 0.5 * (hi - lo);
  auto integrand = [&](double phi) {
    const double r = mid - half * std::cos(phi);
    if (r <= 0) return 0.0;
    double c = (r * r + d * d - R * R) / (2 * r * d);
    c = std::clamp(c, -1.0, 1.0);
    if (c > 1 - 1e-14) return 0.0;
    const double theta = 2 * std::acos(c);
    return std::pow(r, 2 / m - 1) * theta * half * std::sin(phi);
  };
  const double part = integrate_adaptive(integrand, 0, kPi, 1e-11, 1e-10) / (m * kPi);
  return std::clamp(full + part, 0.0, 1.0);
}

double annulus_measure(cplx z0, double R, double width, double m) {
  if (!(width > 0)) throw DomainError("annulus_measure: width must be positive");
  const double outer = limit_ball_measure(z0, R, m);
  if (R - width <= 0) return outer;
  return std::max(0.0, outer - limit_ball_measure(z0, R - width, m));
}

double log_potential_limit(cplx z) {
  const double r = std::abs(z);
  if (r > 1) return -std::log(r);
  return 0.5 * (1 - r * r);
}

double integrate_limit_measure(const std::function<double(cplx)>& f, double m,
                               int radial_panels, int angles) {
  check_m(m);
  if (radial_panels < 1 || angles < 1) throw DomainError("integrate_limit_measure: bad resolution");
  const GaussRule& g = gauss_legendre(16);
  double acc = 0;
  const double h = 1.0 / radial_panels;
  for (int p = 0; p < radial_panels; ++p) {
    for (int i = 0; i < 16; ++i) {
      const double u = (p + 0.5 * (1 + g.nodes[i])) * h;
      const double wr = 0.5 * h * g.weights[i];
      const double um = std::pow(u, m);
      double ring = 0;
      for (int k = 0; k < angles; ++k) {
        const double th = 2 * kPi * (k + 0.5) / angles;
        ring += f(std::polar(um, m * th));
      }
      acc += wr * u * ring * (2 * kPi / angles);
    }
  }
  return acc / kPi;
}

StieltjesPoint stieltjes_limit(cplx z, cplx w) {
  if (!(w.imag() > 0)) throw DomainError("stieltjes_limit: Im w must be positive");
  auto admissible = [](const std::array<cplx, 3>& r) {
    int count = 0, idx = -1;
    for (int i = 0; i < 3; ++i)
      if (r[i].imag() > 0) {
        ++count;
        idx = i;
      }
    return std::pair{count, idx};
  };
  auto roots = cubic_roots(z, w);
  auto [count, idx] = admissible(roots);
  if (count == 1) return {z, w, roots[idx]};

  // Ambiguous: follow the branch down from w + i, where it is isolated.
  constexpr int kSteps = 64;
  auto start = cubic_roots(z, w + cplx(0, 1));
  cplx cur = *std::max_element(start.begin(), start.end(),
                               [](cplx a, cplx b) { return a.imag() < b.imag(); });
  for (int k = 1; k <= kSteps; ++k) {
    const cplx wk = w + cplx(0, 1.0 - double(k) / kSteps);
    auto r = cubic_roots(z, wk);
    cur = *std::min_element(r.begin(), r.end(), [&](cplx a, cplx b) {
      return std::abs(a - cur) < std::abs(b - cur);
    });
  }
  if (!(cur.imag() > 0))
    throw PrecisionError("stieltjes_limit: no admissible root (w too close to the real axis)");
  return {z, w, cur};
}

double stieltjes_residual(const StieltjesPoint& p) {
  const cplx ws = p.w + p.s;
  return std::abs(p.s * (ws * ws - std::norm(p.z)) + ws);
}

double nu_z_density(cplx z, double x, double eps) {
  if (!(eps > 0) || eps > 0.1) throw DomainError("nu_z_density: eps must lie in (0, 0.1]");
  const StieltjesPoint p = stieltjes_limit(z, cplx(x, eps));
  return std::max(0.0, p.s.imag() / kPi);
}

}  // namespace prodlaw
