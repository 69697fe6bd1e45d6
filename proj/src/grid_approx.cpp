#include <algorithm>
#include <cmath>
#include <numbers>

#include "prodlaw/errors.hpp"
#include "prodlaw/limits.hpp"
#include "prodlaw/potential.hpp"
#include "prodlaw/rng.hpp"
#include "prodlaw/spectra.hpp"

namespace prodlaw {

namespace {

constexpr double kClampDistance = 1e-9;

// Lattice indices i with h (i + s) in [lo, hi].
std::pair<long, long> index_range(double lo, double hi, double h, double s) {
  return {long(std::ceil(lo / h - s)), long(std::floor(hi / h - s))};
}

}  // namespace

double RandomGrid::spacing() const {
  if (M == 0) throw DomainError("RandomGrid: M must be positive");
  return 2 * beta / std::sqrt(double(M));
}

std::size_t RandomGrid::count() const {
  const double h = spacing();
  const auto [x0, x1] = index_range(-beta, beta, h, shift_x);
  const auto [y0, y1] = index_range(-beta, beta, h, shift_y);
  return std::size_t(std::max(0L, x1 - x0 + 1)) * std::size_t(std::max(0L, y1 - y0 + 1));
}

void RandomGrid::for_each_in_box(double x0, double x1, double y0, double y1,
                                 const std::function<void(cplx)>& fn) const {
  const double h = spacing();
  const auto [i0, i1] = index_range(std::max(x0, -beta), std::min(x1, beta), h, shift_x);
  const auto [j0, j1] = index_range(std::max(y0, -beta), std::min(y1, beta), h, shift_y);
  for (long j = j0; j <= j1; ++j)
    for (long i = i0; i <= i1; ++i) fn(cplx(h * (i + shift_x), h * (j + shift_y)));
}

std::vector<cplx> RandomGrid::points() const {
  std::vector<cplx> pts;
  pts.reserve(count());
  for_each_in_box(-beta, beta, -beta, beta, [&](cplx z) { pts.push_back(z); });
  return pts;
}

RandomGrid make_random_grid(double beta, std::size_t M, std::uint64_t seed, std::uint64_t draw) {
  if (!(beta > 0)) throw DomainError("make_random_grid: beta must be positive");
  if (M == 0) throw DomainError("make_random_grid: M must be positive");
  CounterRng rng(stream_key(seed, {draw}));
  RandomGrid g;
  g.beta = beta;
  g.M = M;
  g.shift_x = rng.uniform();
  g.shift_y = rng.uniform();
  return g;
}

SmoothTestFunction as_test_function(const MollifiedIndicator& f) {
  return {[f](cplx z) { return mollified_indicator_eval(f, z); }, f.center,
          mollifier_support_radius(f)};
}

SmoothTestFunction as_test_function(const PowerComposed& f) {
  return {[f](cplx z) { return f.eval(z); }, 0, f.support_radius()};
}

GridApproxResult grid_approximation(std::span<const cplx> eigenvalues, const SmoothTestFunction& f,
                                    const RandomGrid& grid,
                                    const std::function<double(cplx)>& U) {
  if (eigenvalues.empty()) throw DomainError("grid_approximation: no eigenvalues");
  const double r = f.support_radius;
  const cplx c = f.support_center;
  if (std::abs(c.real()) + r >= grid.beta || std::abs(c.imag()) + r >= grid.beta)
    throw DomainError("grid_approximation: support of f leaves (-beta, beta)^2");

  GridApproxResult out;
  out.M = grid.M;
  out.shift_x = grid.shift_x;
  out.shift_y = grid.shift_y;
  double lhs = 0;
  for (cplx l : eigenvalues) lhs += f.eval(l).value;
  out.lhs = lhs / double(eigenvalues.size());

  const double N = double(eigenvalues.size());
  double acc = 0;
  grid.for_each_in_box(c.real() - r, c.real() + r, c.imag() - r, c.imag() + r, [&](cplx z) {
    const double lap = f.eval(z).laplacian;
    if (lap == 0) return;
    ++out.points_used;
    double u;
    if (U) {
      u = U(z);
    } else {
      double s = 0;
      for (cplx l : eigenvalues) {
        double d = std::abs(l - z);
        if (d < kClampDistance) {
          d = kClampDistance;
          ++out.clamped;
        }
        s += std::log(d);
      }
      u = -s / N;
    }
    acc += lap * u;
  });
  out.rhs = -(2 * grid.beta * grid.beta / (std::numbers::pi * double(grid.M))) * acc;
  out.gap = out.lhs - out.rhs;
  return out;
}

LocalLawIdentity local_law_identity_eval(const ProductSample& sample, const MollifiedIndicator& f,
                                         int m, int quad_resolution) {
  if (m < 1 || std::size_t(m) != sample.factors.size())
    throw DomainError("local_law_identity_eval: m must match the number of factors");
  if (quad_resolution < 16) throw DomainError("local_law_identity_eval: resolution too small");
  const Spectrum ex = eigenvalues(sample.product);
  const Linearization lin = build_linearization(sample);
  const Spectrum ew = eigenvalues(lin.W);
  const PowerComposed ft(f, m);

  LocalLawIdentity out;
  double s = 0;
  for (cplx l : ex.eigenvalues) s += mollified_indicator_eval(f, l).value;
  out.eigen_sum = s / double(ex.eigenvalues.size());
  s = 0;
  for (cplx l : ew.eigenvalues) s += ft.eval(l).value;
  out.w_sum = s / double(ew.eigenvalues.size());

  out.limit_integral = integrate_limit_measure(
      [&f](cplx z) { return mollified_indicator_eval(f, z).value; }, m);

  const double box = ft.support_radius() * (1 + 1e-9);
  const double h = 2 * box / quad_resolution;
  const double Nw = double(ew.eigenvalues.size());
  double acc = 0;
  for (int j = 0; j < quad_resolution; ++j) {
    const double y = -box + (j + 0.5) * h;
    for (int i = 0; i < quad_resolution; ++i) {
      const cplx z(-box + (i + 0.5) * h, y);
      const double lap = ft.eval(z).laplacian;
      if (lap == 0) continue;
      double u = 0;
      for (cplx l : ew.eigenvalues) u += std::log(std::abs(l - z));
      acc += lap * (-u / Nw - log_potential_limit(z));
    }
  }
  out.quadrature_form = -acc * h * h / (2 * std::numbers::pi) + out.limit_integral;
  return out;
}

}  // namespace prodlaw
