#include <algorithm>
#include <cmath>
#include <vector>

#include "prodlaw/errors.hpp"
#include "prodlaw/specfun.hpp"

namespace prodlaw {

namespace {

double limit_cdf(double R, int m) { return R >= 1 ? 1.0 : std::pow(R, 2.0 / m); }

double signed_diff(const MeanSpectralMeasure& mu, double R) {
  return mu.ball_measure(R) - limit_cdf(R, mu.m());
}

}  // namespace

DistanceSup mean_distance_sup(const MeanSpectralMeasure& mu, double R_lo, double R_hi) {
  if (!(R_lo > 0) || !(R_hi > R_lo)) throw DomainError("mean_distance_sup: need 0 < R_lo < R_hi");
  const int n = mu.n();
  std::vector<double> grid;
  constexpr int kGeo = 512;
  for (int i = 0; i < kGeo; ++i)
    grid.push_back(R_lo * std::pow(R_hi / R_lo, double(i) / (kGeo - 1)));
  const double band = 10 * std::sqrt(std::log(std::max(n, 2)) / n);
  const double dlo = std::max(R_lo, 1 - band), dhi = std::min(R_hi, 1 + band);
  if (dhi > dlo)
    for (int i = 0; i <= kGeo; ++i) grid.push_back(dlo + (dhi - dlo) * i / kGeo);
  if (R_lo < 1 && R_hi >= 1) grid.push_back(1.0);
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());

  std::size_t best = 0;
  double best_v = -1, best_d = 0;
  std::vector<double> vals(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double d = signed_diff(mu, grid[i]);
    vals[i] = std::abs(d);
    if (vals[i] > best_v) {
      best_v = vals[i];
      best = i;
      best_d = d;
    }
  }
  DistanceSup out{best_v, grid[best], best_d};

  // Golden-section polish on the bracketing cell(s).
  double a = grid[best > 0 ? best - 1 : 0];
  double b = grid[std::min(best + 1, grid.size() - 1)];
  const double phi = 0.5 * (std::sqrt(5.0) - 1);
  double x1 = b - phi * (b - a), x2 = a + phi * (b - a);
  double d1 = signed_diff(mu, x1), d2 = signed_diff(mu, x2);
  while (b - a > 1e-7 * b) {
    if (std::abs(d1) > std::abs(d2)) {
      b = x2;
      x2 = x1;
      d2 = d1;
      x1 = b - phi * (b - a);
      d1 = signed_diff(mu, x1);
    } else {
      a = x1;
      x1 = x2;
      d1 = d2;
      x2 = a + phi * (b - a);
      d2 = signed_diff(mu, x2);
    }
  }
  for (auto [x, d] : {std::pair{x1, d1}, std::pair{x2, d2}})
    if (std::abs(d) > out.value) out = {std::abs(d), x, d};
  return out;
}

double mean_distance_floor(int n, int m) { return std::pow(1e-4 / n, m / 2.0); }

DistanceProfile mean_distance_profile(int n, int m, std::span<const double> R_grid) {
  if (R_grid.empty()) throw DomainError("mean_distance_profile: empty grid");
  for (std::size_t i = 0; i < R_grid.size(); ++i) {
    if (!(R_grid[i] > 0)) throw DomainError("mean_distance_profile: radii must be positive");
    if (i > 0 && !(R_grid[i] > R_grid[i - 1]))
      throw DomainError("mean_distance_profile: grid must be increasing");
  }
  auto mu = mean_measure(n, m);
  DistanceProfile p;
  for (double R : R_grid) p.points.push_back({R, signed_diff(*mu, R)});
  p.sup = mean_distance_sup(*mu, mean_distance_floor(n, m), 2.0);
  return p;
}

}  // namespace prodlaw
