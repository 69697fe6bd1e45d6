#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "prodlaw/errors.hpp"
#include "prodlaw/limits.hpp"
#include "prodlaw/potential.hpp"

using namespace prodlaw;

namespace {

// Monte Carlo estimate of mu_inf^m(B_R(z0)) by pushing uniform points forward.
double mc_ball(cplx z0, double R, int m, int N, std::mt19937_64& gen) {
  std::uniform_real_distribution<double> U(0, 1);
  int hit = 0;
  for (int i = 0; i < N; ++i) {
    const cplx zeta = std::polar(std::sqrt(U(gen)), 2 * std::numbers::pi * U(gen));
    hit += std::abs(std::pow(zeta, m) - z0) < R;
  }
  return double(hit) / N;
}

double envelope(int m, double a) {
  if (m == 1) return 1 / a;
  if (m == 2) return std::log(a) / a;
  return std::pow(a, -2.0 / m);
}

}  // namespace

TEST_CASE("limit density and centered balls") {
  CHECK(limit_density(cplx(0.5, 0), 1) == doctest::Approx(1 / std::numbers::pi));
  CHECK(limit_density(cplx(0.5, 0), 2) == doctest::Approx(1 / (0.5 * 2 * std::numbers::pi)));
  CHECK(limit_density(cplx(1.5, 0), 2) == 0.0);
  for (int m : {1, 2, 3})
    for (double R : {0.1, 0.7, 1.0, 2.0})
      CHECK(limit_ball_measure(0, R, m) == doctest::Approx(std::min(std::pow(R, 2.0 / m), 1.0)).epsilon(1e-14));
  CHECK(limit_ball_measure(cplx(0.5, 0), 0.3, 1) == doctest::Approx(0.09).epsilon(1e-10));
  CHECK_THROWS_AS(limit_ball_measure(0, 0.0, 1), DomainError);
}

TEST_CASE("off-center balls against Monte Carlo") {
  std::mt19937_64 gen(20240611);
  const int N = 400000;
  for (int m : {1, 2, 3})
    for (auto [z0, R] : {std::pair{cplx(0.4, 0.0), 0.4}, std::pair{cplx(0.3, 0.2), 0.6},
                         std::pair{cplx(-0.7, 0.5), 0.5}, std::pair{cplx(1.2, 0.0), 0.5}}) {
      const double exact = limit_ball_measure(z0, R, m);
      const double mc = mc_ball(z0, R, m, N, gen);
      const double sigma = std::sqrt(std::max(exact * (1 - exact), 1e-6) / N);
      CHECK(std::abs(exact - mc) <= 5 * sigma);
    }
}

TEST_CASE("annulus measure and the mollifier envelope") {
  // outer - inner lives in the annulus R - 2/a <= |z - z0| <= R + 2/a
  const std::pair<cplx, double> balls[] = {{cplx(0, 0), 0.5}, {cplx(0.4, 0), 0.4}, {cplx(0.3, 0.2), 0.6}};
  for (int m : {1, 2, 3})
    for (auto [z0, R] : balls) {
      for (double a : {10.0, 100.0, 1000.0}) {
        const double ann = annulus_measure(z0, R + 2 / a, 4 / a, m);
        CHECK(ann >= 0);
        CHECK(ann <= 10 * envelope(m, a));
      }
      // measure gap of the sandwich at a = 10 is bounded by the annulus
      const double a = 10;
      MollifiedIndicator in{z0, R, a, MollifierSide::Inner}, out{z0, R, a, MollifierSide::Outer};
      const double gap = integrate_limit_measure(
          [&](cplx z) { return mollified_indicator_eval(out, z).value - mollified_indicator_eval(in, z).value; },
          m, 128, 512);
      CHECK(gap <= annulus_measure(z0, R + 2 / a, 4 / a, m) + 1e-3);
      const double ball = limit_ball_measure(z0, R, m);
      CHECK(integrate_limit_measure([&](cplx z) { return mollified_indicator_eval(in, z).value; }, m, 128, 512) <=
            ball + 1e-3);
      CHECK(integrate_limit_measure([&](cplx z) { return mollified_indicator_eval(out, z).value; }, m, 128, 512) >=
            ball - 1e-3);
    }
}

TEST_CASE("limit potential") {
  CHECK(log_potential_limit(0) == 0.5);
  CHECK(log_potential_limit(cplx(0, 2)) == doctest::Approx(-std::log(2.0)));
  // continuity across the unit circle
  CHECK(log_potential_limit(cplx(1 - 1e-9, 0)) == doctest::Approx(log_potential_limit(cplx(1 + 1e-9, 0))).epsilon(1e-8));
  CHECK(integrate_limit_measure([](cplx) { return 1.0; }, 2) == doctest::Approx(1.0).epsilon(1e-13));
  CHECK(integrate_limit_measure([](cplx z) { return std::norm(z); }, 1) == doctest::Approx(0.5).epsilon(1e-13));
  // E|z|^2 under mu_inf^3 = E|zeta|^6 = 1/4
  CHECK(integrate_limit_measure([](cplx z) { return std::norm(z); }, 3) == doctest::Approx(0.25).epsilon(1e-13));
}

TEST_CASE("Stieltjes fixed point") {
  const StieltjesPoint p = stieltjes_limit(0, cplx(0, 2));
  CHECK(p.s.real() == doctest::Approx(0.0).epsilon(1e-14));
  CHECK(p.s.imag() == doctest::Approx(std::sqrt(2.0) - 1).epsilon(1e-13));
  for (cplx z : {cplx(0, 0), cplx(0.5, 0.2), cplx(1.3, 0)})
    for (cplx w : {cplx(0.1, 0.01), cplx(-1.5, 0.3), cplx(3, 1e-3), cplx(0, 5)}) {
      const StieltjesPoint q = stieltjes_limit(z, w);
      CHECK(q.s.imag() > 0);
      CHECK(stieltjes_residual(q) < 1e-10);
    }
  // Herglotz decay s ~ -1/w
  const StieltjesPoint far = stieltjes_limit(cplx(0.3, 0), cplx(0, 1e4));
  CHECK(std::abs(far.s * cplx(0, 1e4) + 1.0) < 1e-6);
  CHECK_THROWS_AS(stieltjes_limit(0, cplx(1, 0)), DomainError);
}

TEST_CASE("smoothed density at z = 0 is the semicircle") {
  for (double x : {0.0, 1.0, -1.0, 1.7}) {
    const double semi = std::sqrt(4 - x * x) / (2 * std::numbers::pi);
    CHECK(std::abs(nu_z_density(0, x, 1e-4) - semi) < 2e-3);
  }
  CHECK_THROWS_AS(nu_z_density(0, 0, 0.5), DomainError);
}
