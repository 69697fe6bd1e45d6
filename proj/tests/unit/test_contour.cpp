#include <doctest.h>

#include <cmath>

#include "prodlaw/errors.hpp"
#include "prodlaw/specfun.hpp"

using namespace prodlaw;

TEST_CASE("double contour agrees with the series") {
  for (int m : {1, 2, 3})
    for (int n : {2, 8, 32})
      for (double R : {0.5, 1.0, 1.5}) {
        const double s = mean_ball_measure(R, n, m);
        const double c = mean_ball_measure_contour(R, n, m);
        CHECK(c == doctest::Approx(s).epsilon(1e-9));
      }
}

TEST_CASE("unshifted line where it is well conditioned") {
  ContourConfig cfg;
  cfg.shift_vertical = false;
  for (double R : {0.5, 1.0})
    CHECK(mean_ball_measure_contour(R, 4, 2, cfg) == doctest::Approx(mean_ball_measure(R, 4, 2)).epsilon(1e-8));
}

TEST_CASE("real m is accepted") {
  const double a = mean_ball_measure_contour(0.8, 6, 2.0);
  const double b = mean_ball_measure_contour(0.8, 6, 2.5);
  CHECK(a == doctest::Approx(mean_ball_measure(0.8, 6, 2)).epsilon(1e-9));
  CHECK(b > 0);
  CHECK(b < 1);
}

TEST_CASE("contour configuration checks") {
  ContourConfig bad;
  bad.rect_left = 1.0;  // passes through the pole at 1
  CHECK_THROWS_AS(mean_ball_measure_contour(0.5, 4, 1, bad), DomainError);
  ContourConfig close;
  close.shift_vertical = false;
  close.vertical_abscissa = 0.6;  // only 0.15 from the rectangle
  CHECK_THROWS_AS(mean_ball_measure_contour(0.5, 4, 1, close), DomainError);
  ContourConfig low;
  low.rect_half_height = 0.1;
  CHECK_THROWS_AS(mean_ball_measure_contour(0.5, 4, 1, low), DomainError);
  CHECK_THROWS_AS(mean_ball_measure_contour(-1.0, 4, 1), DomainError);
  ContourConfig trunc;
  trunc.vertical_truncation = 0.5;
  CHECK_THROWS_AS(mean_ball_measure_contour(1.0, 8, 2, trunc), PrecisionError);
}
