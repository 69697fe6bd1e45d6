#include <algorithm>
#include <array>
#include <cmath>
#include <vector>

#include "prodlaw/errors.hpp"
#include "prodlaw/potential.hpp"
#include "prodlaw/quadrature.hpp"

namespace prodlaw {

namespace {

double raw_bump(double rho) {
  if (!(std::abs(rho) < 1)) return 0;
  return std::exp(-1 / (1 - rho * rho));
}

constexpr int kTailNodes = 256;

// Psi at u_j = -1 + 2j/kTailNodes, accumulated from the right.
const std::vector<double>& tail_table() {
  static const std::vector<double> table = [] {
    std::vector<double> t(kTailNodes + 1, 0.0);
    const GaussRule& g = gauss_legendre(16);
    const double h = 2.0 / kTailNodes;
    for (int j = kTailNodes - 1; j >= 0; --j) {
      const double a = -1 + j * h;
      t[j] = t[j + 1] + integrate_gl(bump, a, a + h, g);
    }
    return t;
  }();
  return table;
}

struct Radial {
  double v, d1, d2;  // g, g', g''
};

// g(r) = (1_{(-inf, L]} * phi_a)(r) = Psi(a (r - L)).
Radial radial_factor(double r, double L, double a) {
  const double u = a * (r - L);
  return {bump_tail(u), -a * bump(u), -a * a * bump_derivative(u)};
}

// h(|z - c|) as a planar function.
SmoothValue radial_planar(cplx z, cplx c, double L, double a) {
  const cplx d = z - c;
  const double r = std::abs(d);
  const Radial g = radial_factor(r, L, a);
  SmoothValue out;
  out.value = g.v;
  if (r < 1e-300) {
    out.laplacian = 2 * g.d2;
    return out;
  }
  out.gradient = g.d1 * d / r;
  out.laplacian = g.d2 + g.d1 / r;
  return out;
}

}  // namespace

double bump_normalization() {
  static const double C = [] {
    return 1 / integrate_adaptive(raw_bump, -1, 1, 1e-16, 1e-13);
  }();
  return C;
}

double bump(double rho) { return bump_normalization() * raw_bump(rho); }

double bump_derivative(double rho) {
  if (!(std::abs(rho) < 1)) return 0;
  const double q = 1 - rho * rho;
  return bump(rho) * (-2 * rho / (q * q));
}

double bump_tail(double u) {
  if (u <= -1) return 1;
  if (u >= 1) return 0;
  const auto& t = tail_table();
  const double h = 2.0 / kTailNodes;
  int j = int((u + 1) / h);
  if (j >= kTailNodes) j = kTailNodes - 1;
  const double right = -1 + (j + 1) * h;
  return std::clamp(t[j + 1] + integrate_gl(bump, u, right, gauss_legendre(16)), 0.0, 1.0);
}

double mollifier_support_radius(const MollifiedIndicator& f) {
  if (f.side == MollifierSide::Outer) return f.radius + 2 / f.a;
  return f.radius > 2 / f.a ? f.radius : 0.0;
}

SmoothValue mollified_indicator_eval(const MollifiedIndicator& f, cplx z) {
  if (!(f.a > 1)) throw DomainError("mollified indicator: a must exceed 1");
  if (!(f.radius >= 0)) throw DomainError("mollified indicator: radius must be nonnegative");
  const double s = f.side == MollifierSide::Outer ? 1.0 : -1.0;
  if (f.side == MollifierSide::Inner && f.radius <= 2 / f.a) return {};
  // cheap exits outside the support
  if (std::abs(z - f.center) >= f.radius + s / f.a + 1 / f.a) return {};
  if (std::abs(z) >= f.cutoff + s / f.a + 1 / f.a) return {};
  const SmoothValue A = radial_planar(z, f.center, f.radius + s / f.a, f.a);
  const SmoothValue B = radial_planar(z, 0, f.cutoff + s / f.a, f.a);
  SmoothValue out;
  out.value = A.value * B.value;
  out.gradient = A.value * B.gradient + B.value * A.gradient;
  const double cross = (std::conj(A.gradient) * B.gradient).real();
  out.laplacian = A.value * B.laplacian + B.value * A.laplacian + 2 * cross;
  return out;
}

PowerComposed::PowerComposed(MollifiedIndicator f, int m) : f_(f), m_(m) {
  if (m < 1) throw DomainError("compose_power: m must be >= 1");
}

SmoothValue PowerComposed::eval(cplx z) const {
  if (m_ == 1) return mollified_indicator_eval(f_, z);
  const cplx zm1 = std::pow(z, m_ - 1);
  const SmoothValue F = mollified_indicator_eval(f_, zm1 * z);
  const cplx dg = double(m_) * zm1;
  SmoothValue out;
  out.value = F.value;
  out.gradient = F.gradient * std::conj(dg);
  out.laplacian = std::norm(dg) * F.laplacian;
  return out;
}

double PowerComposed::support_radius() const {
  const double outer_cut = f_.cutoff + (f_.side == MollifierSide::Outer ? 2 / f_.a : 0.0);
  const double w = std::min(std::abs(f_.center) + mollifier_support_radius(f_), outer_cut);
  return std::pow(w, 1.0 / m_);
}

PowerComposed compose_power(const MollifiedIndicator& f, int m) { return PowerComposed(f, m); }

}  // namespace prodlaw
