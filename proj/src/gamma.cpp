#include <array>
#include <cmath>
#include <numbers>

#include "prodlaw/specfun.hpp"

namespace prodlaw {

namespace {

constexpr double kLanczosG = 7.0;
constexpr std::array<double, 9> kLanczos = {
    0.99999999999980993,  676.5203681218851,     -1259.1392167224028,
    771.32342877765313,   -176.61502916214059,   12.507343278686905,
    -0.13857109526572012, 9.9843695780195716e-6, 1.5056327351493116e-7};

const double kHalfLog2Pi = 0.5 * std::log(2 * std::numbers::pi);

template <class T>
T digamma_asymptotic(T x) {
  const T r = T(1) / x, r2 = r * r;
  return std::log(x) - 0.5 * r -
         r2 * (1.0 / 12 -
               r2 * (1.0 / 120 -
                     r2 * (1.0 / 252 -
                           r2 * (1.0 / 240 -
                                 r2 * (1.0 / 132 -
                                       r2 * (691.0 / 32760 - r2 / 12.0))))));
}

}  // namespace

cplx log_gamma(cplx z) {
  if (z.real() < 0.5) {
    // Gamma(z) Gamma(1 - z) = pi / sin(pi z).  Off the real axis log sin is
    // taken on the branch continuous from Re z = 1/2, so the result stays
    // the analytic continuation along vertical lines.
    if (z.imag() < 0) return std::conj(log_gamma(std::conj(z)));
    const double pi = std::numbers::pi;
    cplx log_sin;
    if (z.imag() > 0) {
      const cplx i(0, 1);
      log_sin = -i * pi * z + std::log(1.0 - std::exp(2.0 * i * pi * z)) +
                cplx(-std::log(2.0), 0.5 * pi);
    } else {
      log_sin = std::log(cplx(std::sin(pi * z.real()), 0));
    }
    return std::log(pi) - log_sin - log_gamma(1.0 - z);
  }
  z -= 1.0;
  cplx x = kLanczos[0];
  for (int i = 1; i < 9; ++i) x += kLanczos[i] / (z + double(i));
  const cplx t = z + kLanczosG + 0.5;
  return kHalfLog2Pi + (z + 0.5) * std::log(t) - t + std::log(x);
}

double digamma(double x) {
  double acc = 0;
  while (x < 10) {
    acc -= 1 / x;
    x += 1;
  }
  return acc + digamma_asymptotic(x);
}

cplx digamma(cplx z) {
  cplx acc = 0;
  while (std::abs(z) < 10 || z.real() < 1) {
    acc -= 1.0 / z;
    z += 1.0;
  }
  return acc + digamma_asymptotic(z);
}

double trigamma(double x) {
  double acc = 0;
  while (x < 10) {
    acc += 1 / (x * x);
    x += 1;
  }
  const double r = 1 / x, r2 = r * r;
  return acc + r + 0.5 * r2 +
         r * r2 *
             (1.0 / 6 -
              r2 * (1.0 / 30 -
                    r2 * (1.0 / 42 -
                          r2 * (1.0 / 30 -
                                r2 * (5.0 / 66 - r2 * (691.0 / 2730 - r2 * 7.0 / 6))))));
}

}  // namespace prodlaw
