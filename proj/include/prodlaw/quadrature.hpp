#pragma once

#include <functional>
#include <span>
#include <vector>

namespace prodlaw {

/// Gauss-Legendre rule on [-1, 1].
struct GaussRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// Cached rule of the given order (computed once per order, thread-safe).
const GaussRule& gauss_legendre(int order);

/// Integral of a smooth function over [a, b] with one application of `rule`.
double integrate_gl(const std::function<double(double)>& f, double a, double b,
                    const GaussRule& rule);

/// Adaptive integration of a positive integrand given through its logarithm.
///
/// Panels start from `breaks` (sorted) and are bisected until the 16-point
/// estimate and its two halves agree to `rel_tol`, or the panel is negligible
/// against the running total.  Returns log of the integral (-inf when the
/// integrand vanishes everywhere).  Throws PrecisionError when `max_depth`
/// bisections are not enough.
double integrate_log_positive(const std::function<double(double)>& log_f,
                              std::span<const double> breaks, double rel_tol,
                              int max_depth = 40);

/// Adaptive Gauss-Legendre integration of a real function (16 vs 2x16 points).
/// Stops when the summed panel error is below max(abs_tol, rel_tol |I|);
/// `max_depth` caps the bisection depth of any panel.
double integrate_adaptive(const std::function<double(double)>& f, double a,
                          double b, double abs_tol, double rel_tol,
                          int max_depth = 40);

}  // namespace prodlaw
