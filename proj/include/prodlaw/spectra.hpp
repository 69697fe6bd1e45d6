#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "prodlaw/types.hpp"

namespace prodlaw {

struct Spectrum {
  std::vector<cplx> eigenvalues;
  std::vector<double> sorted_moduli;  // nondecreasing
};

Spectrum make_spectrum(std::vector<cplx> eigenvalues);

/// Eigenvalues of a dense square matrix (LAPACK zgeev).
Spectrum eigenvalues(const Matrix& a);

/// Singular values, nonincreasing (LAPACK zgesdd).
std::vector<double> singular_values(const Matrix& a);

/// |det(a) - prod lambda_j| / |det(a)|, both sides in the log domain.
double determinant_relative_gap(const Matrix& a, const Spectrum& s);

enum class FamilyKind { Centered, Bulk, AnnulusAvoiding };

/// Ball family for distance statistics.
///  - Centered: B_R(0).
///  - Bulk(tau): B inside B_{1-tau} or inside the complement of B_{1+tau}.
///  - AnnulusAvoiding(tau): the boundary circle lies in {|z| >= 1+tau} or in
///    {tau <= |z| < 1-tau}.
struct BallFamily {
  FamilyKind kind = FamilyKind::Centered;
  double tau = 0;
  std::string name() const;
};

struct BallDistanceStat {
  double value = 0;         // sup |mu_n(B) - mu_inf(B)|
  double signed_value = 0;  // mu_n(B) - mu_inf(B) at the argmax
  cplx argmax_center = 0;
  double argmax_radius = 0;
  BallFamily family;
};

/// Exact sup over R > 0 of |mu_n(B_R(0)) - min(R^{2/m}, 1)| (Kolmogorov
/// statistic of the sorted moduli).
BallDistanceStat radial_ks_distance(const Spectrum& s, double m);

/// Counts sum_k Bernoulli(eta_k(R)), k < n, one per trial.  Trial t uses
/// substreams keyed by (seed, t, k).
std::vector<int> bernoulli_count_sample(int n, int m, double R, int trials, std::uint64_t seed);

/// Grid lower bound on the sup over a ball family.  Centers: polar grid with
/// `center_resolution` radial levels and 2 * center_resolution angles;
/// radii: `radius_resolution` points per admissible interval.  Point counts
/// are exact (sorted distances per center); the limit measure is tabulated per
/// radial level, which rotation invariance makes valid for all angles.
BallDistanceStat ball_sup_distance(const Spectrum& s, double m, const BallFamily& family,
                                   int center_resolution = 64, int radius_resolution = 256);

struct BallSupCheck {
  BallDistanceStat coarse;
  BallDistanceStat fine;  // both resolutions doubled
  bool converged = false;  // relative change <= 5%
};

BallSupCheck ball_sup_distance_checked(const Spectrum& s, double m, const BallFamily& family,
                                       int center_resolution = 64, int radius_resolution = 256);

/// CDF of the quarter-circle law on [0, 2].
double quarter_circle_cdf(double x);

/// KS distance between the empirical law of `values` and a continuous CDF.
double ks_distance(std::vector<double> values, double (*cdf)(double));

}  // namespace prodlaw
