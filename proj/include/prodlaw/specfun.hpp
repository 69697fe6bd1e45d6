#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <span>
#include <utility>
#include <vector>

#include "prodlaw/types.hpp"

namespace prodlaw {

// ---------------------------------------------------------------- gamma

/// Principal log Gamma for complex arguments (Lanczos, g = 7, 9 terms;
/// reflection for Re z < 1/2).  Relative error about 1e-15 on Re z >= 1/2.
cplx log_gamma(cplx z);

/// Real digamma and trigamma for x > 0.
double digamma(double x);
double trigamma(double x);

/// Complex digamma, accurate to ~1e-12 for Re z > 0.
cplx digamma(cplx z);

// ---------------------------------------------------------------- Meijer G

/// Configuration of the Mellin-Barnes quadrature for G^{m,0}_{0,m}.
///
/// Zero in `contour_abscissa` or `im_truncation` selects the automatic
/// choice: the line through the real saddle of Gamma(s)^m x^{-s}, and a
/// truncation height found by marching outward until the integrand is below
/// e^{-46} of its peak.  An explicit truncation is checked against the same
/// tail bound and rejected with PrecisionError when too short.
struct MeijerWeight {
  double m = 1;
  double contour_abscissa = 0;
  double im_truncation = 0;
  int panels = 8;
};

struct SignedLog {
  double log_magnitude;
  int sign;
};

/// One quadrature node of the Mellin-Barnes line (diagnostic dump).
struct QuadratureNode {
  double re, im, weight, integrand_log_magnitude;
};

/// log G^{m,0}_{0,m}(x) with sign.  Relative accuracy 1e-8 or better.
SignedLog meijer_g_log(double x, const MeijerWeight& w = {});

/// Nodes used by meijer_g_log at its finest accepted level.
std::vector<QuadratureNode> meijer_g_nodes(double x, const MeijerWeight& w = {});

/// Convenience: exp of meijer_g_log (can underflow).
double meijer_g(double x, const MeijerWeight& w = {});

// --------------------------------------------------------- mean measure

/// Exact finite-n mean spectral measure of the product of m Ginibre
/// matrices, radial variable t = n R^{2/m}.
///
/// Construction tabulates the radial density on GL16 panels (width 0.5,
/// geometrically graded toward 0 for m >= 2) with prefix sums, so a ball
/// measure costs one partial panel.  The table is built on first use.
/// eta(k, R) integrates the k-th kernel eigenvalue adaptively and caches the
/// result (mutex-guarded, idempotent).
class MeanSpectralMeasure {
 public:
  MeanSpectralMeasure(int n, int m, double panel_width = 0.5);

  int n() const { return n_; }
  int m() const { return m_; }

  /// log of the radial density in t (integrates to 1 over t > 0).
  double log_radial_density(double t) const;
  /// Planar density rho(z) at |z| = abs_z.
  double density(double abs_z) const;
  /// mu(B_R(0)).
  double ball_measure(double R) const;
  /// 1 - mu(B_R(0)), computed directly from the tail.
  double ball_complement(double R) const;
  /// eta_k(R) in [0, 1].
  double eta(int k, double R) const;
  /// Total mass of the table minus 1 (diagnostic).
  double normalization_error() const;
  /// Upper end of the tabulated t range.
  double t_end() const;

  std::size_t eta_cache_size() const;

 private:
  double log_S(double log_x) const;
  double panel_integral(double a, double b) const;
  double tail_beyond(double t) const;
  void build_table() const;
  void ensure_table() const { std::call_once(table_once_, [this] { build_table(); }); }

  int n_, m_;
  double panel_width_;
  std::vector<double> lgf_;  // log k!
  mutable std::once_flag table_once_;
  mutable std::vector<double> edges_;  // panel boundaries in t
  mutable std::vector<double> cum_;    // mass of panels before j
  mutable std::vector<double> suf_;    // mass of panels from j on
  mutable double total_ = 0;
  mutable double t_end_ = 0;
  mutable double tail_end_ = 0;  // mass beyond t_end_
  mutable std::mutex cache_mu_;
  mutable std::map<std::pair<int, double>, double> eta_cache_;
};

/// Shared instance for (n, m); built once per process.
std::shared_ptr<const MeanSpectralMeasure> mean_measure(int n, int m);

/// eta_k(R) = (1/k!^m) * int_0^{n^m R^2} G(u) u^k du.
double eta_k(int k, int n, int m, double R);

/// rho_n^m(z) at |z| = abs_z.  abs_z = 0 with m >= 2 is a DomainError.
double mean_density(double abs_z, int n, int m);

/// mu_n^m(B_R(0)) from the tabulated radial profile.
double mean_ball_measure(double R, int n, int m);

/// Same quantity as (1/n) sum_k eta_k(R); slow, used for cross-checks.
double mean_ball_measure_series(double R, int n, int m);

/// eta_k(R) for k = 0..n-1 on one shared node set (checked against halved
/// panels to 1e-10 relative).
std::vector<double> eta_all(int n, int m, double R);

// ---------------------------------------------------------- contour form

/// Double-contour evaluation parameters.
///
/// The rectangle defaults to Re in [3/4, n + 1/4], Im in [-1, 1].  With
/// `shift_vertical` the vertical line is moved to Re s = floor(n R^{2/m}) + 1/2
/// and the rectangle is split around it; both pieces keep distance 1/4 from
/// the line and from the integers.  This avoids the cancellation of the
/// unshifted form when n^m R^2 is large.  Without the shift the line sits at
/// `vertical_abscissa`.
struct ContourConfig {
  double rect_left = 0.75;
  double rect_right_offset = 0.25;  // right edge at n + offset
  double rect_half_height = 1.0;
  double vertical_abscissa = 0.5;
  double vertical_truncation = 0;   // 0: automatic tail cut
  double panel_density = 4;         // GL16 panels per unit length on the rectangle
  bool shift_vertical = true;
};

/// mu_n^m(B_R) through the double contour integral.  Real non-integer m is
/// accepted (experimental; no series counterpart exists there).
double mean_ball_measure_contour(double R, int n, double m,
                                 const ContourConfig& cfg = {});

// ---------------------------------------------------- distance profile

struct DistancePoint {
  double R;
  double diff;  // mu_n^m(B_R) - min(R^{2/m}, 1)
};

struct DistanceSup {
  double value;   // sup |diff|
  double R_star;  // argmax
  double signed_diff;
};

struct DistanceProfile {
  std::vector<DistancePoint> points;
  DistanceSup sup;
};

/// Radius where t = n R^{2/m} equals 1e-4; both measures of the ball are
/// O(1e-4 / n) there.
double mean_distance_floor(int n, int m);

/// Signed differences on `R_grid` plus the sup over R in [floor, 2].
DistanceProfile mean_distance_profile(int n, int m, std::span<const double> R_grid);

/// sup over R in [R_lo, R_hi] of |mu_n^m(B_R) - min(R^{2/m},1)| by a 512-point
/// geometric grid (densified near R = 1) and golden-section polish.
DistanceSup mean_distance_sup(const MeanSpectralMeasure& mu, double R_lo,
                              double R_hi);

}  // namespace prodlaw
