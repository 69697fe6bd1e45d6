#include "prodlaw/ensembles.hpp"

#include <cmath>
#include <numbers>

#include "prodlaw/errors.hpp"
#include "prodlaw/rng.hpp"

namespace prodlaw {

namespace {
// Substream coordinate for condition (C) diagnostics, disjoint from factors.
constexpr std::uint64_t kDiagnosticStream = 0xC0DEC0DEULL;
}  // namespace

EntryLaw parse_entry_law(const std::string& name) {
  if (name == "complex-gaussian" || name == "ginibre") return EntryLaw::ComplexGaussian;
  if (name == "real-gaussian") return EntryLaw::RealGaussian;
  if (name == "rademacher") return EntryLaw::Rademacher;
  if (name == "uniform-centered" || name == "uniform") return EntryLaw::UniformCentered;
  if (name == "student-t5" || name == "t5") return EntryLaw::StudentT5;
  throw DomainError("unknown entry law: " + name);
}

std::string entry_law_name(EntryLaw law) {
  switch (law) {
    case EntryLaw::ComplexGaussian: return "complex-gaussian";
    case EntryLaw::RealGaussian: return "real-gaussian";
    case EntryLaw::Rademacher: return "rademacher";
    case EntryLaw::UniformCentered: return "uniform-centered";
    case EntryLaw::StudentT5: return "student-t5";
  }
  throw DomainError("unknown entry law");
}

cplx draw_entry(EntryLaw law, std::uint64_t seed, std::uint64_t q, std::uint64_t row,
                std::uint64_t col) {
  CounterRng rng(stream_key(seed, {q, row, col}));
  switch (law) {
    case EntryLaw::ComplexGaussian: {
      const double a = rng.normal(), b = rng.normal();
      return {a * std::numbers::sqrt2 / 2, b * std::numbers::sqrt2 / 2};
    }
    case EntryLaw::RealGaussian: return rng.normal();
    case EntryLaw::Rademacher: return (rng.next_u64() >> 63) ? 1.0 : -1.0;
    case EntryLaw::UniformCentered: return std::sqrt(3.0) * (2 * rng.uniform() - 1);
    case EntryLaw::StudentT5: {
      const double z = rng.normal();
      double chi2 = 0;
      for (int i = 0; i < 5; ++i) {
        const double g = rng.normal();
        chi2 += g * g;
      }
      // t_5 has variance 5/3
      return z / std::sqrt(chi2 / 5) / std::sqrt(5.0 / 3.0);
    }
  }
  throw DomainError("unknown entry law");
}

Matrix scaled_product(std::span<const Matrix> factors) {
  if (factors.empty()) throw DomainError("scaled_product: no factors");
  const int n = int(factors[0].rows());
  Matrix p = factors[0] / std::sqrt(double(n));
  for (std::size_t q = 1; q < factors.size(); ++q) p = p * (factors[q] / std::sqrt(double(n)));
  return p;
}

double ProductSample::recompute_error() const {
  return (scaled_product(factors) - product).cwiseAbs().maxCoeff();
}

ProductSample sample_product(const EnsembleSpec& spec) {
  if (spec.m < 1 || spec.n < 1) throw DomainError("sample_product: need m, n >= 1");
  ProductSample s;
  for (int q = 1; q <= spec.m; ++q) {
    Matrix X(spec.n, spec.n);
    for (int i = 0; i < spec.n; ++i)
      for (int j = 0; j < spec.n; ++j) X(i, j) = draw_entry(spec.law, spec.seed, q, i, j);
    s.factors.push_back(std::move(X));
  }
  s.product = scaled_product(s.factors);
  return s;
}

Linearization linearization_from_factors(std::span<const Matrix> factors) {
  if (factors.empty()) throw DomainError("build_linearization: no factors");
  Linearization lin;
  lin.m = int(factors.size());
  lin.n = int(factors[0].rows());
  const int n = lin.n;
  lin.W = Matrix::Zero(n * lin.m, n * lin.m);
  for (int q = 1; q <= lin.m; ++q) {
    const auto [br, bc] = lin.block_of(q);
    lin.W.block(br * n, bc * n, n, n) = factors[q - 1] / std::sqrt(double(n));
  }
  return lin;
}

Linearization build_linearization(const ProductSample& sample) {
  return linearization_from_factors(sample.factors);
}

Matrix build_hermitization(const Linearization& lin, cplx z) {
  const Eigen::Index N = lin.W.rows();
  Matrix shifted = lin.W - z * Matrix::Identity(N, N);
  Matrix V = Matrix::Zero(2 * N, 2 * N);
  V.topRightCorner(N, N) = shifted;
  V.bottomLeftCorner(N, N) = shifted.adjoint();
  return V;
}

double analytic_abs_moment(EntryLaw law, double p) {
  const double sqrtpi = std::sqrt(std::numbers::pi);
  switch (law) {
    case EntryLaw::ComplexGaussian: return std::tgamma(1 + p / 2);
    case EntryLaw::RealGaussian: return std::pow(2.0, p / 2) * std::tgamma((p + 1) / 2) / sqrtpi;
    case EntryLaw::Rademacher: return 1;
    case EntryLaw::UniformCentered: return std::pow(3.0, p / 2) / (p + 1);
    case EntryLaw::StudentT5: {
      const double nu = 5;
      if (p >= nu) return INFINITY;
      const double raw = std::pow(nu, p / 2) * std::tgamma((p + 1) / 2) *
                         std::tgamma((nu - p) / 2) / (sqrtpi * std::tgamma(nu / 2));
      return raw * std::pow(3.0 / 5.0, p / 2);
    }
  }
  throw DomainError("unknown entry law");
}

ConditionCReport condition_c_report(const EnsembleSpec& spec, std::size_t samples) {
  if (samples < 10000) throw DomainError("condition_c_report: need at least 1e4 samples");
  ConditionCReport r;
  r.law = spec.law;
  r.samples = samples;
  const double p = 4 + r.delta;
  double sre = 0, sim = 0, sre2 = 0, sim2 = 0, s2 = 0, s4 = 0, sp = 0, sp2 = 0, sp_half = 0;
  for (std::size_t i = 0; i < samples; ++i) {
    const cplx x = draw_entry(spec.law, spec.seed, kDiagnosticStream, i, 0);
    const double a2 = std::norm(x);
    const double ap = std::pow(a2, p / 2);
    sre += x.real();
    sim += x.imag();
    sre2 += x.real() * x.real();
    sim2 += x.imag() * x.imag();
    s2 += a2;
    s4 += a2 * a2;
    sp += ap;
    sp2 += ap * ap;
    if (i + 1 == samples / 2) sp_half = sp;
  }
  const double N = double(samples);
  auto est = [N](double s, double ss) {
    const double mean = s / N;
    const double var = std::max(0.0, ss / N - mean * mean);
    return MomentEstimate{mean, std::sqrt(var / N)};
  };
  r.mean_re = est(sre, sre2);
  r.mean_im = est(sim, sim2);
  r.variance = est(s2, s4);
  r.abs_moment = est(sp, sp2);
  r.abs_moment_half = sp_half / double(samples / 2);
  r.analytic_abs_moment = analytic_abs_moment(spec.law, p);
  const double bound = 1 / std::sqrt(N);
  r.mean_ok = std::abs(r.mean_re.value) <= 4 * bound && std::abs(r.mean_im.value) <= 4 * bound;
  r.variance_ok = std::abs(r.variance.value - 1) <= 8 * bound;
  r.moment_ok = std::isfinite(r.analytic_abs_moment) && std::isfinite(r.abs_moment.value) &&
                std::abs(r.abs_moment.value - r.abs_moment_half) <= 0.2 * r.abs_moment.value;
  return r;
}

}  // namespace prodlaw
