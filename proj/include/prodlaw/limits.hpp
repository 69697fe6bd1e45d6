#pragma once

#include <functional>

#include "prodlaw/types.hpp"

namespace prodlaw {

/// Density |z|^{2/m-2}/(pi m) of the m-th power of the uniform law on B_1.
double limit_density(cplx z, double m);

/// mu_inf^m(B_R(z0)).  Centered balls are exact; off-center balls integrate
/// the circle-intersection angle in r (error <= 1e-7).
double limit_ball_measure(cplx z0, double R, double m);

/// mu_inf^m({R - width <= |z - z0| <= R}).
double annulus_measure(cplx z0, double R, double width, double m);

/// Logarithmic potential of the uniform law on the unit disc.
double log_potential_limit(cplx z);

/// Integral of f against mu_inf^m, computed as the pushforward of the uniform
/// law under z -> z^m (GL in the radius, trapezoid in the angle).
double integrate_limit_measure(const std::function<double(cplx)>& f, double m,
                               int radial_panels = 64, int angles = 256);

struct StieltjesPoint {
  cplx z;
  cplx w;
  cplx s;
};

/// Solution of s = -(w + s) / ((w + s)^2 - |z|^2) with Im s > 0 (Herglotz
/// branch, s ~ -1/w at infinity).  Requires Im w > 0.
StieltjesPoint stieltjes_limit(cplx z, cplx w);

/// |s((w+s)^2 - |z|^2) + (w+s)|.
double stieltjes_residual(const StieltjesPoint& p);

/// (1/pi) Im s(z, x + i eps), the smoothed symmetric density of the
/// hermitized limit at z.  eps must lie in (0, 0.1].
double nu_z_density(cplx z, double x, double eps);

}  // namespace prodlaw
