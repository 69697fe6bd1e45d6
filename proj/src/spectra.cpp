#include <complex>
#define lapack_complex_float std::complex<float>
#define lapack_complex_double std::complex<double>
#include <lapacke.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include <Eigen/LU>

#include "prodlaw/errors.hpp"
#include "prodlaw/rng.hpp"
#include "prodlaw/specfun.hpp"
#include "prodlaw/spectra.hpp"

namespace prodlaw {

Spectrum make_spectrum(std::vector<cplx> eigenvalues) {
  Spectrum s;
  s.eigenvalues = std::move(eigenvalues);
  s.sorted_moduli.reserve(s.eigenvalues.size());
  for (cplx z : s.eigenvalues) s.sorted_moduli.push_back(std::abs(z));
  std::sort(s.sorted_moduli.begin(), s.sorted_moduli.end());
  return s;
}

Spectrum eigenvalues(const Matrix& a) {
  if (a.rows() != a.cols()) throw DomainError("eigenvalues: matrix must be square");
  if (!a.allFinite()) throw DomainError("eigenvalues: non-finite entries");
  const lapack_int n = lapack_int(a.rows());
  if (n == 0) return {};
  Matrix work = a;
  std::vector<cplx> w(n);
  const lapack_int info = LAPACKE_zgeev(LAPACK_COL_MAJOR, 'N', 'N', n, work.data(), n, w.data(),
                                        nullptr, 1, nullptr, 1);
  if (info != 0) {
    const double norm = a.cwiseAbs().maxCoeff();
    throw BackendError("zgeev failed, info = " + std::to_string(info) +
                       ", max |a_ij| = " + std::to_string(norm));
  }
  return make_spectrum(std::move(w));
}

std::vector<double> singular_values(const Matrix& a) {
  if (!a.allFinite()) throw DomainError("singular_values: non-finite entries");
  const lapack_int r = lapack_int(a.rows()), c = lapack_int(a.cols());
  if (r == 0 || c == 0) return {};
  Matrix work = a;
  std::vector<double> s(std::min(r, c));
  const lapack_int info = LAPACKE_zgesdd(LAPACK_COL_MAJOR, 'N', r, c, work.data(), r, s.data(),
                                         nullptr, 1, nullptr, 1);
  if (info != 0) throw BackendError("zgesdd failed, info = " + std::to_string(info));
  return s;
}

double determinant_relative_gap(const Matrix& a, const Spectrum& s) {
  Eigen::PartialPivLU<Matrix> lu(a);
  const Matrix& LU = lu.matrixLU();
  cplx logdet = 0;
  for (Eigen::Index i = 0; i < LU.rows(); ++i) logdet += std::log(LU(i, i));
  if (lu.permutationP().determinant() < 0) logdet += cplx(0, std::numbers::pi);
  cplx logprod = 0;
  for (cplx z : s.eigenvalues) logprod += std::log(z);
  const cplx d = logprod - logdet;
  // compare modulo 2 pi i
  const double im = std::remainder(d.imag(), 2 * std::numbers::pi);
  return std::abs(std::exp(cplx(d.real(), im)) - 1.0);
}

std::string BallFamily::name() const {
  switch (kind) {
    case FamilyKind::Centered: return "centered";
    case FamilyKind::Bulk: return "bulk(" + std::to_string(tau) + ")";
    case FamilyKind::AnnulusAvoiding: return "annulus-avoiding(" + std::to_string(tau) + ")";
  }
  return "?";
}

BallDistanceStat radial_ks_distance(const Spectrum& s, double m) {
  const std::size_t n = s.sorted_moduli.size();
  if (n == 0) throw DomainError("radial_ks_distance: empty spectrum");
  BallDistanceStat out;
  out.family = {FamilyKind::Centered, 0};
  for (std::size_t j = 1; j <= n; ++j) {
    const double r = s.sorted_moduli[j - 1];
    const double F = r >= 1 ? 1.0 : std::pow(r, 2 / m);
    const double above = double(j) / n - F;       // R just above r
    const double below = double(j - 1) / n - F;   // R just below r
    for (double d : {above, below})
      if (std::abs(d) > out.value) {
        out.value = std::abs(d);
        out.signed_value = d;
        out.argmax_radius = r;
      }
  }
  return out;
}

std::vector<int> bernoulli_count_sample(int n, int m, double R, int trials, std::uint64_t seed) {
  if (!(R > 0)) throw DomainError("bernoulli_count_sample: R must be positive");
  if (trials < 1) throw DomainError("bernoulli_count_sample: trials must be >= 1");
  auto mu = mean_measure(n, m);
  std::vector<double> eta(n);
  for (int k = 0; k < n; ++k) eta[k] = mu->eta(k, R);
  std::vector<int> counts(trials);
  for (int t = 0; t < trials; ++t) {
    int c = 0;
    for (int k = 0; k < n; ++k) {
      CounterRng rng(stream_key(seed, {std::uint64_t(t), std::uint64_t(k)}));
      if (rng.uniform() < eta[k]) ++c;
    }
    counts[t] = c;
  }
  return counts;
}

double quarter_circle_cdf(double x) {
  if (x <= 0) return 0;
  if (x >= 2) return 1;
  return (0.5 * x * std::sqrt(4 - x * x) + 2 * std::asin(0.5 * x)) / std::numbers::pi;
}

double ks_distance(std::vector<double> values, double (*cdf)(double)) {
  if (values.empty()) throw DomainError("ks_distance: empty sample");
  std::sort(values.begin(), values.end());
  const double n = double(values.size());
  double d = 0;
  for (std::size_t j = 0; j < values.size(); ++j) {
    const double F = cdf(values[j]);
    d = std::max({d, std::abs((j + 1) / n - F), std::abs(j / n - F)});
  }
  return d;
}

}  // namespace prodlaw
