#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <tuple>

#include "prodlaw/errors.hpp"
#include "prodlaw/limits.hpp"
#include "prodlaw/spectra.hpp"

namespace prodlaw {

namespace {

struct Level {
  double rho = 0;
  int angles = 1;
  std::vector<double> radii;     // ascending
  std::vector<double> limit;     // mu_inf(B_R(rho)) per radius
  std::vector<char> right_ok;    // R slightly above radii[k] is still admissible
};

using Key = std::tuple<double, int, double, int, int>;

void add_interval(std::vector<std::pair<double, char>>& out, double lo, double hi, bool lo_open,
                  bool hi_open, int res) {
  if (!(hi > lo)) return;
  if (hi_open) hi -= 1e-12 * std::max(1.0, hi);
  for (int k = 0; k < res; ++k) {
    double R;
    if (lo_open)
      R = lo + (hi - lo) * (k + 1) / res;
    else
      R = lo + (hi - lo) * k / (res - 1);
    if (R <= 0) continue;
    out.push_back({R, char(k + 1 < res)});
  }
}

std::vector<Level> build_levels(double m, const BallFamily& f, int cres, int rres) {
  const double tau = f.tau;
  std::vector<double> rhos;
  switch (f.kind) {
    case FamilyKind::Centered: rhos = {0.0}; break;
    case FamilyKind::Bulk:
      for (int i = 0; i < cres; ++i) rhos.push_back((1 - tau) * i / cres);
      for (int j = 1; j <= cres / 4; ++j) rhos.push_back(1 + tau + double(j) / (cres / 4));
      break;
    case FamilyKind::AnnulusAvoiding:
      for (int i = 0; i <= cres; ++i) rhos.push_back((2 + tau) * i / cres);
      break;
  }
  std::vector<Level> levels;
  for (double rho : rhos) {
    std::vector<std::pair<double, char>> grid;
    switch (f.kind) {
      case FamilyKind::Centered: add_interval(grid, 0, 3, true, false, rres); break;
      case FamilyKind::Bulk:
        if (rho < 1 - tau) add_interval(grid, 0, 1 - tau - rho, true, false, rres);
        if (rho > 1 + tau) add_interval(grid, 0, rho - 1 - tau, true, false, rres);
        break;
      case FamilyKind::AnnulusAvoiding:
        if (rho < 1 - tau) {
          add_interval(grid, 0, std::min(rho - tau, 1 - tau - rho), true, false, rres);
          add_interval(grid, rho + tau, 1 - tau - rho, false, true, rres);
        }
        if (rho >= 1 + tau) add_interval(grid, 0, rho - 1 - tau, true, false, rres);
        add_interval(grid, rho + 1 + tau, rho + 2 + tau, false, false, rres);
        break;
    }
    if (grid.empty()) continue;
    std::sort(grid.begin(), grid.end());
    Level lv;
    lv.rho = rho;
    lv.angles = rho == 0 ? 1 : 2 * cres;
    for (auto [R, ok] : grid) {
      lv.radii.push_back(R);
      lv.right_ok.push_back(ok);
      lv.limit.push_back(limit_ball_measure(cplx(rho, 0), R, m));
    }
    levels.push_back(std::move(lv));
  }
  return levels;
}

std::shared_ptr<const std::vector<Level>> cached_levels(double m, const BallFamily& f, int cres,
                                                         int rres) {
  static std::mutex mu;
  static std::map<Key, std::shared_ptr<const std::vector<Level>>> cache;
  const Key key{m, int(f.kind), f.tau, cres, rres};
  {
    std::lock_guard lock(mu);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
  }
  auto built = std::make_shared<const std::vector<Level>>(build_levels(m, f, cres, rres));
  std::lock_guard lock(mu);
  return cache.emplace(key, built).first->second;
}

}  // namespace

BallDistanceStat ball_sup_distance(const Spectrum& s, double m, const BallFamily& family,
                                   int center_resolution, int radius_resolution) {
  if (s.eigenvalues.empty()) throw DomainError("ball_sup_distance: empty spectrum");
  if (family.kind != FamilyKind::Centered && !(family.tau > 0 && family.tau < 1))
    throw DomainError("ball_sup_distance: tau must lie in (0, 1)");
  if (center_resolution < 64 || radius_resolution < 64)
    throw DomainError("ball_sup_distance: resolutions must be >= 64");
  const auto levels = cached_levels(m, family, center_resolution, radius_resolution);
  const double n = double(s.eigenvalues.size());
  BallDistanceStat out;
  out.family = family;
  std::vector<double> dist(s.eigenvalues.size());
  for (const Level& lv : *levels) {
    for (int a = 0; a < lv.angles; ++a) {
      const cplx c = std::polar(lv.rho, 2 * std::numbers::pi * a / lv.angles);
      for (std::size_t j = 0; j < dist.size(); ++j) dist[j] = std::abs(s.eigenvalues[j] - c);
      std::sort(dist.begin(), dist.end());
      std::size_t open = 0;
      for (std::size_t k = 0; k < lv.radii.size(); ++k) {
        const double R = lv.radii[k];
        while (open < dist.size() && dist[open] < R) ++open;
        std::size_t closed = open;
        while (closed < dist.size() && dist[closed] <= R) ++closed;
        const double L = lv.limit[k];
        auto consider = [&](double count) {
          const double d = count / n - L;
          if (std::abs(d) > out.value) {
            out.value = std::abs(d);
            out.signed_value = d;
            out.argmax_center = c;
            out.argmax_radius = R;
          }
        };
        consider(double(open));
        if (lv.right_ok[k]) consider(double(closed));
      }
    }
  }
  return out;
}

BallSupCheck ball_sup_distance_checked(const Spectrum& s, double m, const BallFamily& family,
                                       int center_resolution, int radius_resolution) {
  BallSupCheck r;
  r.coarse = ball_sup_distance(s, m, family, center_resolution, radius_resolution);
  r.fine = ball_sup_distance(s, m, family, 2 * center_resolution, 2 * radius_resolution);
  r.converged = std::abs(r.fine.value - r.coarse.value) <= 0.05 * r.fine.value;
  return r;
}

}  // namespace prodlaw
