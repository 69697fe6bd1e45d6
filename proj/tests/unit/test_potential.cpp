#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "prodlaw/ensembles.hpp"
#include "prodlaw/errors.hpp"
#include "prodlaw/limits.hpp"
#include "prodlaw/potential.hpp"
#include "prodlaw/quadrature.hpp"
#include "prodlaw/spectra.hpp"

using namespace prodlaw;

namespace {

double fd_laplacian(const std::function<double(cplx)>& f, cplx z, double h) {
  return (f(z + h) + f(z - h) + f(z + cplx(0, h)) + f(z - cplx(0, h)) - 4 * f(z)) / (h * h);
}

bool in_ball(cplx z, cplx c, double R) { return std::abs(z - c) <= R; }

}  // namespace

TEST_CASE("empirical potential worked example") {
  Matrix X = Matrix::Zero(2, 2);
  X(0, 0) = std::sqrt(2.0);
  X(1, 1) = 2 * std::sqrt(2.0);
  const Matrix f[] = {X};
  const Linearization lin = linearization_from_factors(f);
  const cplx z0[] = {cplx(0)};
  for (PotentialForm form : {PotentialForm::Eigenvalue, PotentialForm::Singular}) {
    const PotentialField p = log_potential_empirical(lin, z0, form);
    CHECK(p.U_n[0] == doctest::Approx(-std::log(std::sqrt(2.0))).epsilon(1e-14));
    CHECK(p.U_inf[0] == 0.5);
    CHECK(p.flagged[0] == 0);
  }
  // W = X / sqrt 2 = diag(1, 2) is normal, so s_min(W - z) is the distance to {1, 2}
  const cplx z1[] = {cplx(0), cplx(2.5, 1)};
  const PotentialField sv = log_potential_empirical(lin, z1, PotentialForm::Singular);
  REQUIRE(sv.s_min.size() == 2);
  CHECK(sv.s_min[0] == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(sv.s_min[1] == doctest::Approx(std::abs(cplx(0.5, 1))).epsilon(1e-14));
  CHECK(log_potential_empirical(lin, z1, PotentialForm::Eigenvalue).s_min.empty());
  // a point on the spectrum is flagged, not fatal
  const cplx on[] = {cplx(1, 0)};
  CHECK(log_potential_empirical(lin, on, PotentialForm::Eigenvalue).flagged[0] == 1);
}

TEST_CASE("Girko identity: both potential forms agree") {
  const ProductSample s = sample_product({2, 32, EntryLaw::ComplexGaussian, 8});
  const Linearization lin = build_linearization(s);
  std::mt19937_64 gen(1);
  std::uniform_real_distribution<double> U(-1.5, 1.5);
  std::vector<cplx> z;
  for (int i = 0; i < 20; ++i) z.emplace_back(U(gen), U(gen));
  const PotentialField e = log_potential_empirical(lin, z, PotentialForm::Eigenvalue);
  const PotentialField g = log_potential_empirical(lin, z, PotentialForm::Singular);
  const Spectrum px = eigenvalues(s.product);
  for (std::size_t i = 0; i < z.size(); ++i) {
    CHECK(std::abs(e.U_n[i] - g.U_n[i]) <= 1e-8 * std::abs(g.U_n[i]));
    CHECK(power_potential(px.eigenvalues, 2, z[i]) == doctest::Approx(e.U_n[i]).epsilon(1e-9));
    CHECK(e.U_inf[i] == log_potential_limit(z[i]));
  }
}

TEST_CASE("far field and unitary input") {
  const ProductSample s = sample_product({1, 64, EntryLaw::ComplexGaussian, 4});
  const Linearization lin = build_linearization(s);
  const cplx z[] = {cplx(10, 0), cplx(0, 1e3)};
  const PotentialField p = log_potential_empirical(lin, z, PotentialForm::Eigenvalue);
  CHECK(std::abs(p.U_n[0] + std::log(10.0)) <= 0.05);
  CHECK(std::abs(p.U_n[1] + std::log(1e3)) <= 2e-3);

  const int n = 5;
  Matrix P = Matrix::Zero(n, n);
  for (int i = 0; i < n; ++i) P(i, (i + 2) % n) = std::polar(std::sqrt(double(n)), 0.3 * i);
  const Matrix fs[] = {P, P};
  const Linearization u = linearization_from_factors(fs);
  const cplx origin[] = {cplx(0)};
  for (PotentialForm form : {PotentialForm::Eigenvalue, PotentialForm::Singular})
    CHECK(std::abs(log_potential_empirical(u, origin, form).U_n[0]) < 1e-13);
}

TEST_CASE("ring grid validity") {
  const double radii[] = {0.5, 1.5, 1.05};
  const auto g = ring_grid(radii, 8);
  CHECK(g.size() == 24);
  const ProductSample s = sample_product({1, 8, EntryLaw::ComplexGaussian, 1});
  CHECK_THROWS_AS(local_law_statistic({1, 8, EntryLaw::ComplexGaussian, 1}, g, 0.2, 1), DomainError);
}

TEST_CASE("local-law statistic does not grow") {
  const double radii[] = {0.5, 1.5};
  const auto z = ring_grid(radii, 16);
  const LocalLawResult a = local_law_statistic({1, 128, EntryLaw::ComplexGaussian, 21}, z, 0.2, 20);
  const LocalLawResult b = local_law_statistic({1, 256, EntryLaw::ComplexGaussian, 21}, z, 0.2, 20);
  REQUIRE(a.max_gap.size() == 20);
  CHECK(b.median_normalized / a.median_normalized <= 1.5);
  for (double v : a.per_z_max) CHECK(v >= 0);
}

TEST_CASE("bump function") {
  CHECK(bump_normalization() == doctest::Approx(2.252284).epsilon(1e-6));
  const double raw = integrate_adaptive([](double r) { return std::exp(-1 / (1 - r * r)); }, -1, 1, 1e-14, 1e-13);
  CHECK(raw == doctest::Approx(0.4439938).epsilon(1e-6));
  CHECK(bump(1.0) == 0.0);
  CHECK(bump(-1.2) == 0.0);
  CHECK(bump_tail(-1) == doctest::Approx(1.0).epsilon(1e-13));
  CHECK(bump_tail(0) == doctest::Approx(0.5).epsilon(1e-13));
  for (double u : {-0.9, -0.3, 0.2, 0.77})
    CHECK(bump_tail(u) == doctest::Approx(integrate_adaptive(bump, u, 1, 1e-14, 1e-13)).epsilon(1e-11));
  const double h = 1e-6;
  CHECK(bump_derivative(0.4) == doctest::Approx((bump(0.4 + h) - bump(0.4 - h)) / (2 * h)).epsilon(1e-7));
}

TEST_CASE("mollified indicator values") {
  const MollifiedIndicator in{cplx(0.3, 0.1), 0.5, 10, MollifierSide::Inner};
  const MollifiedIndicator out{cplx(0.3, 0.1), 0.5, 10, MollifierSide::Outer};
  const SmoothValue deep = mollified_indicator_eval(in, cplx(0.3, 0.1) + 0.2);
  CHECK(deep.value == 1.0);
  CHECK(deep.gradient == cplx(0));
  CHECK(deep.laplacian == 0.0);
  const SmoothValue away = mollified_indicator_eval(out, cplx(0.3, 0.1) + 0.71);
  CHECK(away.value == 0.0);
  CHECK(away.laplacian == 0.0);
  CHECK(mollifier_support_radius(in) == doctest::Approx(0.5));
  CHECK(mollifier_support_radius(out) == doctest::Approx(0.7));
  CHECK_THROWS_AS(mollified_indicator_eval({0, 1, 0.5}, 0), DomainError);

  // inner vanishes identically for R <= 2/a
  std::mt19937_64 gen(3);
  std::uniform_real_distribution<double> U(-1, 1);
  const MollifiedIndicator tiny{cplx(0.1, 0), 0.2, 10, MollifierSide::Inner};
  for (int i = 0; i < 1000; ++i) CHECK(mollified_indicator_eval(tiny, cplx(U(gen), U(gen)) * 0.5).value == 0.0);
}

TEST_CASE("sandwich: inner <= indicator <= outer") {
  std::mt19937_64 gen(5);
  std::uniform_real_distribution<double> U(-8, 8);
  const std::pair<cplx, double> balls[] = {{0, 0.5}, {cplx(0.4, 0), 0.4}, {cplx(-2, 3), 5.5}, {cplx(1, 1), 0.15}};
  for (auto [c, R] : balls)
    for (double a : {4.0, 10.0, 100.0}) {
      const MollifiedIndicator in{c, R, a, MollifierSide::Inner}, out{c, R, a, MollifierSide::Outer};
      int bad = 0;
      for (int i = 0; i < 10000; ++i) {
        // half the points near the boundary circle
        const cplx z = i % 2 ? cplx(U(gen), U(gen))
                             : c + std::polar(R + U(gen) / (4 * a), U(gen));
        const double ind = in_ball(z, c, R) && std::abs(z) <= 7 ? 1.0 : 0.0;
        const double vi = mollified_indicator_eval(in, z).value;
        const double vo = mollified_indicator_eval(out, z).value;
        bad += !(vi <= ind && ind <= vo && vi >= 0 && vo <= 1);
      }
      CHECK(bad == 0);
    }
}

// Error of the step-h central difference and of its Richardson extrapolation
// (steps h and 2h), both relative to the largest |laplacian| seen.
struct FdErrors {
  double plain = 0, richardson = 0, scale = 0;
};

void accumulate(FdErrors& e, const std::function<double(cplx)>& f, cplx z, double lap) {
  const double h = 1e-4;
  const double a1 = fd_laplacian(f, z, h), a2 = fd_laplacian(f, z, 2 * h);
  e.plain = std::max(e.plain, std::abs(a1 - lap));
  e.richardson = std::max(e.richardson, std::abs((4 * a1 - a2) / 3 - lap));
  e.scale = std::max(e.scale, std::abs(lap));
}

TEST_CASE("mollifier Laplacian against finite differences") {
  std::mt19937_64 gen(7);
  std::uniform_real_distribution<double> U(0, 1);
  for (MollifierSide side : {MollifierSide::Inner, MollifierSide::Outer}) {
    const MollifiedIndicator f{cplx(0.3, 0.1), 0.5, 8, side};
    FdErrors e;
    for (int i = 0; i < 100; ++i) {
      // points in the transition band, where the Laplacian is nonzero
      const double r = f.radius + (side == MollifierSide::Inner ? -2 : 0) / f.a + 2 * U(gen) / f.a;
      const cplx z = f.center + std::polar(r, 2 * std::numbers::pi * U(gen));
      const SmoothValue v = mollified_indicator_eval(f, z);
      accumulate(e, [&](cplx w) { return mollified_indicator_eval(f, w).value; }, z, v.laplacian);
      const double h = 1e-6;
      const double gx = (mollified_indicator_eval(f, z + h).value - mollified_indicator_eval(f, z - h).value) / (2 * h);
      CHECK(std::abs(gx - v.gradient.real()) <= 1e-6 * f.a);
    }
    CHECK(e.plain <= 1e-4 * e.scale);
    CHECK(e.richardson <= 1e-6 * e.scale);
  }
}

TEST_CASE("power composition") {
  const MollifiedIndicator f{cplx(0.3, 0.1), 0.5, 8, MollifierSide::Inner};
  const PowerComposed one = compose_power(f, 1);
  for (cplx z : {cplx(0.4, 0.2), cplx(0.1, -0.3)}) {
    CHECK(one.eval(z).value == mollified_indicator_eval(f, z).value);
    CHECK(one.eval(z).laplacian == mollified_indicator_eval(f, z).laplacian);
  }
  std::mt19937_64 gen(9);
  std::uniform_real_distribution<double> U(-1, 1);
  for (int m : {2, 3}) {
    const PowerComposed g = compose_power(f, m);
    FdErrors e;
    int tested = 0;
    while (tested < 100) {
      const cplx z(U(gen), U(gen));
      const SmoothValue v = g.eval(z);
      if (v.laplacian == 0) continue;
      ++tested;
      accumulate(e, [&](cplx w) { return g.eval(w).value; }, z, v.laplacian);
      CHECK(std::abs(z) <= g.support_radius());
    }
    CHECK(e.plain <= 1e-4 * e.scale);
    CHECK(e.richardson <= 1e-6 * e.scale);
  }
}

TEST_CASE("L1 norm of the composed Laplacian is m times the base norm") {
  // The map z -> z^m covers the plane m times, so the change of variables
  // picks up a factor m.
  const MollifiedIndicator f{cplx(0.3, 0.1), 0.5, 8, MollifierSide::Inner};
  const int res = 1024;
  auto l1 = [res](auto&& lap, double half) {
    const double h = 2 * half / res;
    double s = 0;
    for (int i = 0; i < res; ++i)
      for (int j = 0; j < res; ++j) s += std::abs(lap(cplx(-half + (i + 0.5) * h, -half + (j + 0.5) * h)));
    return s * h * h;
  };
  const double base = l1([&](cplx z) { return mollified_indicator_eval(f, z).laplacian; }, 1.0);
  for (int m : {2, 3}) {
    const PowerComposed g = compose_power(f, m);
    const double comp = l1([&](cplx z) { return g.eval(z).laplacian; }, g.support_radius());
    CHECK(comp / base == doctest::Approx(double(m)).epsilon(0.01));
  }
}

TEST_CASE("random grid") {
  for (std::size_t M : {1000ul, 10000ul, 1000000ul}) {
    const RandomGrid g = make_random_grid(7, M, 12, 3);
    CHECK(g.spacing() == doctest::Approx(14 / std::sqrt(double(M))));
    const double c = double(g.count());
    CHECK(std::abs(c - double(M)) <= 4 * std::sqrt(double(M)) + 4);
    CHECK(g.shift_x >= 0);
    CHECK(g.shift_x <= 1);
    if (M == 1000) {
      const auto pts = g.points();
      CHECK(pts.size() == g.count());
      std::size_t inbox = 0;
      g.for_each_in_box(-1, 1, -1, 1, [&](cplx z) {
        ++inbox;
        CHECK(std::abs(z.real()) <= 1);
      });
      std::size_t direct = 0;
      for (cplx z : pts) direct += std::abs(z.real()) <= 1 && std::abs(z.imag()) <= 1;
      CHECK(inbox == direct);
    }
  }
  const RandomGrid a = make_random_grid(7, 100, 1, 2), b = make_random_grid(7, 100, 1, 2);
  CHECK(a.shift_x == b.shift_x);
  CHECK(a.shift_x != make_random_grid(7, 100, 1, 3).shift_x);
}

TEST_CASE("grid approximation") {
  const std::vector<cplx> ev{cplx(0)};
  SmoothTestFunction zero{[](cplx) { return SmoothValue{}; }, 0, 1};
  const GridApproxResult r0 = grid_approximation(ev, zero, make_random_grid(7, 10000, 1, 0));
  CHECK(r0.lhs == 0.0);
  CHECK(r0.rhs == 0.0);

  const MollifiedIndicator f{0, 2, 4, MollifierSide::Inner};
  const GridApproxResult r = grid_approximation(ev, as_test_function(f), make_random_grid(7, 1000000, 1, 0));
  CHECK(r.lhs == 1.0);
  CHECK(std::abs(r.gap) <= 0.05);
  CHECK(r.gap == doctest::Approx(r.lhs - r.rhs));

  const MollifiedIndicator edge{cplx(6.5, 0), 1, 4, MollifierSide::Outer};
  CHECK_THROWS_AS(grid_approximation(ev, as_test_function(edge), make_random_grid(7, 1000, 1, 0)), DomainError);
}

TEST_CASE("local-law identity") {
  const ProductSample s16 = sample_product({2, 16, EntryLaw::ComplexGaussian, 31});
  const MollifiedIndicator f{cplx(0.2, -0.3), 0.6, 8, MollifierSide::Outer};
  const LocalLawIdentity a = local_law_identity_eval(s16, f, 2, 64);
  CHECK(std::abs(a.eigen_sum - a.w_sum) <= 1e-10);

  // support outside B_2: the spectrum never meets it
  const MollifiedIndicator far{cplx(4, 0), 1, 8, MollifierSide::Inner};
  const LocalLawIdentity b = local_law_identity_eval(s16, far, 2, 512);
  CHECK(b.eigen_sum == 0.0);
  CHECK(b.limit_integral == 0.0);
  CHECK(std::abs(b.quadrature_form) <= 1e-3);

  const ProductSample s32 = sample_product({2, 32, EntryLaw::ComplexGaussian, 32});
  const MollifiedIndicator g{cplx(0.3, 0.1), 0.5, 8, MollifierSide::Inner};
  const LocalLawIdentity c = local_law_identity_eval(s32, g, 2, 2048);
  CHECK(std::abs(c.quadrature_form - c.eigen_sum) <= 1e-3);
  CHECK_THROWS_AS(local_law_identity_eval(s32, g, 3), DomainError);
}
