#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "prodlaw/ensembles.hpp"
#include "prodlaw/types.hpp"

namespace prodlaw {

// ------------------------------------------------------------ potentials

enum class PotentialForm { Eigenvalue, Singular };

struct PotentialField {
  std::vector<cplx> points;
  std::vector<double> U_n;
  std::vector<double> U_inf;
  std::vector<char> flagged;  // z closer than 1e-12 to the spectrum of W
  std::vector<double> s_min;  // singular form only: smallest singular value of W - z
  PotentialForm form = PotentialForm::Eigenvalue;
};

/// U_n(z) = -(1/nm) sum_j log|lambda_j(W) - z| (eigenvalue form) or
/// -(1/nm) sum_j log s_j(W - z) (singular form, one SVD per point).
PotentialField log_potential_empirical(const Linearization& lin, std::span<const cplx> z_points,
                                       PotentialForm form);

/// -(1/N) sum_j log|lambda_j - z| over the given points.
double empirical_potential(std::span<const cplx> eigenvalues, cplx z);

/// Potential of the eigenvalues of W computed from those of the product:
/// -(1/nm) sum_j log|z^m - lambda_j(X)|.  Equal to the W form because
/// det(W - z) = +-det(z^m - X).
double power_potential(std::span<const cplx> product_eigenvalues, int m, cplx z);

struct LocalLawResult {
  std::vector<double> max_gap;     // per trial: max_z |U_n - U_inf|
  std::vector<double> normalized;  // per trial: n * max_gap / log^4 n
  std::vector<double> per_z_max;   // per point: max over trials
  double median_normalized = 0;
};

/// Points z with |1 - |z|| >= tau and |z| <= 1 + 1/tau on the rings given.
std::vector<cplx> ring_grid(std::span<const double> radii, int per_ring);

/// Concentration statistic of U_n - U_inf on a bulk grid over independent
/// trials (trial t uses seed stream_key(spec.seed, {t})).
LocalLawResult local_law_statistic(const EnsembleSpec& spec, std::span<const cplx> z_grid,
                                   double tau, int trials);

// ------------------------------------------------------------ mollifier

/// Bump phi(rho) = C exp(-1/(1 - rho^2)) on (-1, 1), integral 1.
double bump(double rho);
double bump_derivative(double rho);
double bump_normalization();
/// Psi(u) = int_u^1 phi.
double bump_tail(double u);

enum class MollifierSide { Inner, Outer };

/// Smoothed indicator of B_R(z0) intersected with B_cutoff(0):
///   g(|z - z0|; R -+ 1/a) * g(|z|; cutoff -+ 1/a),  g(r; L) = (1_{(-inf, L]} * phi_a)(r),
/// with - for the inner and + for the outer side.  Inner <= indicator <= outer.
/// The inner function is identically 0 when R <= 2/a.
struct MollifiedIndicator {
  cplx center = 0;
  double radius = 1;
  double a = 2;
  MollifierSide side = MollifierSide::Inner;
  double cutoff = 7;
};

/// Value, gradient (f_x + i f_y) and Laplacian.
struct SmoothValue {
  double value = 0;
  cplx gradient = 0;
  double laplacian = 0;
};

SmoothValue mollified_indicator_eval(const MollifiedIndicator& f, cplx z);

/// Radius around the center outside of which f vanishes (R + 2/a outer, R inner).
double mollifier_support_radius(const MollifiedIndicator& f);

/// f~(z) = f(z^m): grad f~ = grad f(z^m) conj(m z^{m-1}),
/// lap f~ = m^2 |z|^{2(m-1)} lap f(z^m).
class PowerComposed {
 public:
  PowerComposed(MollifiedIndicator f, int m);
  SmoothValue eval(cplx z) const;
  const MollifiedIndicator& base() const { return f_; }
  int m() const { return m_; }
  /// Radius of a disc around 0 containing the support of f~.
  double support_radius() const;

 private:
  MollifiedIndicator f_;
  int m_;
};

PowerComposed compose_power(const MollifiedIndicator& f, int m);

// ------------------------------------------------------------ random grid

/// Lattice h (Z^2 + S) intersected with [-beta, beta]^2, h = 2 beta / sqrt(M).
struct RandomGrid {
  double beta = 7;
  std::size_t M = 0;
  double shift_x = 0, shift_y = 0;

  double spacing() const;
  std::size_t count() const;
  std::vector<cplx> points() const;
  /// Calls fn(z) for lattice points inside the axis-parallel box.
  void for_each_in_box(double x0, double x1, double y0, double y1,
                       const std::function<void(cplx)>& fn) const;
};

/// Shift drawn uniformly on [0,1]^2 from stream_key(seed, {draw}).
RandomGrid make_random_grid(double beta, std::size_t M, std::uint64_t seed, std::uint64_t draw);

/// A test function with Laplacian and a disc containing its support.
struct SmoothTestFunction {
  std::function<SmoothValue(cplx)> eval;
  cplx support_center = 0;
  double support_radius = 0;
};

SmoothTestFunction as_test_function(const MollifiedIndicator& f);
SmoothTestFunction as_test_function(const PowerComposed& f);

struct GridApproxResult {
  std::size_t M = 0;
  double shift_x = 0, shift_y = 0;
  double lhs = 0, rhs = 0, gap = 0;
  std::size_t points_used = 0;  // lattice points with nonzero Laplacian
  std::size_t clamped = 0;      // points within 1e-9 of an eigenvalue
};

/// lhs = (1/N) sum f(lambda_j); rhs = -(2 beta^2/(pi M)) sum_i lap f(z_i) U(z_i).
/// U defaults to the empirical potential of the eigenvalues with log|.| clamped
/// at -9 log 10.  Throws DomainError if the support leaves (-beta, beta)^2.
GridApproxResult grid_approximation(std::span<const cplx> eigenvalues, const SmoothTestFunction& f,
                                    const RandomGrid& grid,
                                    const std::function<double(cplx)>& U = nullptr);

// ------------------------------------------------------ local-law identity

struct LocalLawIdentity {
  double eigen_sum = 0;        // (1/n) sum f(lambda_j(X))
  double w_sum = 0;            // (1/nm) sum f~(lambda_j(W))
  double quadrature_form = 0;  // -(1/2pi) int lap f~ (U_n - U_inf) + int f dmu_inf^m
  double limit_integral = 0;   // int f dmu_inf^m
};

/// Evaluates the three forms; the quadrature uses a res x res midpoint grid on
/// the square containing supp f~.
LocalLawIdentity local_law_identity_eval(const ProductSample& sample, const MollifiedIndicator& f,
                                         int m, int quad_resolution = 2048);

}  // namespace prodlaw
