#include <algorithm>
#include <cmath>
#include <numbers>

#include "prodlaw/errors.hpp"
#include "prodlaw/limits.hpp"
#include "prodlaw/parallel.hpp"
#include "prodlaw/potential.hpp"
#include "prodlaw/rng.hpp"
#include "prodlaw/spectra.hpp"

namespace prodlaw {

namespace {

constexpr double kNearSpectrum = 1e-12;

double median(std::vector<double> v) {
  if (v.empty()) return 0;
  std::sort(v.begin(), v.end());
  const std::size_t k = v.size() / 2;
  return v.size() % 2 ? v[k] : 0.5 * (v[k - 1] + v[k]);
}

}  // namespace

double empirical_potential(std::span<const cplx> eigenvalues, cplx z) {
  if (eigenvalues.empty()) throw DomainError("empirical_potential: no eigenvalues");
  double s = 0;
  for (cplx l : eigenvalues) s += std::log(std::abs(l - z));
  return -s / double(eigenvalues.size());
}

double power_potential(std::span<const cplx> product_eigenvalues, int m, cplx z) {
  if (product_eigenvalues.empty()) throw DomainError("power_potential: no eigenvalues");
  if (m < 1) throw DomainError("power_potential: m must be >= 1");
  const cplx zm = std::pow(z, m);
  double s = 0;
  for (cplx l : product_eigenvalues) s += std::log(std::abs(zm - l));
  return -s / (double(product_eigenvalues.size()) * m);
}

PotentialField log_potential_empirical(const Linearization& lin, std::span<const cplx> z_points,
                                       PotentialForm form) {
  const Eigen::Index N = lin.W.rows();
  if (N == 0 || lin.W.cols() != N) throw DomainError("log_potential_empirical: empty or non-square W");
  PotentialField out;
  out.form = form;
  out.points.assign(z_points.begin(), z_points.end());
  out.U_n.resize(z_points.size());
  out.U_inf.resize(z_points.size());
  out.flagged.assign(z_points.size(), 0);
  if (form == PotentialForm::Eigenvalue) {
    const Spectrum s = eigenvalues(lin.W);
    for (std::size_t i = 0; i < z_points.size(); ++i) {
      double acc = 0, closest = INFINITY;
      for (cplx l : s.eigenvalues) {
        const double d = std::abs(l - z_points[i]);
        closest = std::min(closest, d);
        acc += std::log(d);
      }
      out.U_n[i] = -acc / double(N);
      out.flagged[i] = closest < kNearSpectrum;
    }
  } else {
    out.s_min.resize(z_points.size());
    parallel_for(z_points.size(), [&](std::size_t i) {
      Matrix shifted = lin.W;
      shifted.diagonal().array() -= z_points[i];
      const std::vector<double> sv = singular_values(shifted);
      double acc = 0;
      for (double v : sv) acc += std::log(v);
      out.U_n[i] = -acc / double(N);
      out.s_min[i] = sv.back();
      out.flagged[i] = sv.back() < kNearSpectrum;
    });
  }
  for (std::size_t i = 0; i < z_points.size(); ++i) out.U_inf[i] = log_potential_limit(z_points[i]);
  return out;
}

std::vector<cplx> ring_grid(std::span<const double> radii, int per_ring) {
  if (per_ring < 1) throw DomainError("ring_grid: per_ring must be >= 1");
  std::vector<cplx> pts;
  for (double r : radii) {
    if (!(r >= 0)) throw DomainError("ring_grid: negative radius");
    for (int k = 0; k < per_ring; ++k)
      pts.push_back(std::polar(r, 2 * std::numbers::pi * (k + 0.5) / per_ring));
  }
  return pts;
}

LocalLawResult local_law_statistic(const EnsembleSpec& spec, std::span<const cplx> z_grid,
                                   double tau, int trials) {
  if (!(tau > 0 && tau < 1)) throw DomainError("local_law_statistic: tau must lie in (0, 1)");
  if (trials < 1) throw DomainError("local_law_statistic: trials must be >= 1");
  if (spec.n < 2) throw DomainError("local_law_statistic: n must be >= 2");
  if (z_grid.empty()) throw DomainError("local_law_statistic: empty grid");
  for (cplx z : z_grid) {
    const double r = std::abs(z);
    if (std::abs(1 - r) < tau - 1e-12 || r > 1 + 1 / tau)
      throw DomainError("local_law_statistic: grid point outside the bulk region");
  }
  std::vector<std::vector<double>> gaps(trials, std::vector<double>(z_grid.size()));
  parallel_for(std::size_t(trials), [&](std::size_t t) {
    EnsembleSpec s = spec;
    s.seed = stream_key(spec.seed, {t});
    const Spectrum ev = eigenvalues(sample_product(s).product);
    for (std::size_t i = 0; i < z_grid.size(); ++i)
      gaps[t][i] = std::abs(power_potential(ev.eigenvalues, spec.m, z_grid[i]) -
                            log_potential_limit(z_grid[i]));
  });
  LocalLawResult out;
  const double ln = std::log(double(spec.n));
  const double scale = spec.n / (ln * ln * ln * ln);
  out.per_z_max.assign(z_grid.size(), 0.0);
  for (int t = 0; t < trials; ++t) {
    const double mx = *std::max_element(gaps[t].begin(), gaps[t].end());
    out.max_gap.push_back(mx);
    out.normalized.push_back(scale * mx);
    for (std::size_t i = 0; i < z_grid.size(); ++i)
      out.per_z_max[i] = std::max(out.per_z_max[i], gaps[t][i]);
  }
  out.median_normalized = median(out.normalized);
  return out;
}

}  // namespace prodlaw
