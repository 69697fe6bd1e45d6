#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "prodlaw/types.hpp"

namespace prodlaw {

/// Entry laws; all have mean 0 and E|X|^2 = 1.  Complex Gaussian entries
/// have independent real and imaginary parts of variance 1/2 each; the other
/// laws are real.
enum class EntryLaw { ComplexGaussian, RealGaussian, Rademacher, UniformCentered, StudentT5 };

/// Parse/format the CLI names: complex-gaussian, real-gaussian, rademacher,
/// uniform-centered, student-t5.
EntryLaw parse_entry_law(const std::string& name);
std::string entry_law_name(EntryLaw law);

struct EnsembleSpec {
  int m = 1;
  int n = 1;
  EntryLaw law = EntryLaw::ComplexGaussian;
  std::uint64_t seed = 0;
};

/// Entry (row, col) of factor q (1-based), drawn from its own substream.
cplx draw_entry(EntryLaw law, std::uint64_t seed, std::uint64_t q, std::uint64_t row,
                std::uint64_t col);

struct ProductSample {
  std::vector<Matrix> factors;  // X^(1), ..., X^(m), unnormalized
  Matrix product;               // X^(1) ... X^(m) / sqrt(n^m)

  /// Max |entry| of the difference between `product` and a fresh recompute.
  double recompute_error() const;
};

ProductSample sample_product(const EnsembleSpec& spec);

/// Product of explicit factors with the 1/sqrt(n^m) normalization.
Matrix scaled_product(std::span<const Matrix> factors);

/// Block-cyclic mn x mn matrix: block (q-1, q) = X^(q)/sqrt(n) for q < m and
/// X^(m)/sqrt(n) in the lower-left corner.
struct Linearization {
  int n = 0;
  int m = 0;
  Matrix W;
  /// (block row, block col) of factor q = 1..m.
  std::pair<int, int> block_of(int q) const { return {q - 1, q % m}; }
};

Linearization build_linearization(const ProductSample& sample);
Linearization linearization_from_factors(std::span<const Matrix> factors);

/// V(z) = [[0, W - z], [(W - z)^*, 0]].
Matrix build_hermitization(const Linearization& lin, cplx z);

struct MomentEstimate {
  double value = 0;
  double std_error = 0;
};

struct ConditionCReport {
  EntryLaw law;
  std::size_t samples = 0;
  double delta = 0.5;
  MomentEstimate mean_re, mean_im, variance, abs_moment;
  double abs_moment_half = 0;     // same moment on the first half of the draws
  double analytic_abs_moment = 0;
  bool mean_ok = false, variance_ok = false, moment_ok = false;
  bool pass() const { return mean_ok && variance_ok && moment_ok; }
};

/// E|X|^p for the given law.
double analytic_abs_moment(EntryLaw law, double p);

/// Empirical mean, variance and (4 + 1/2)-th absolute moment with standard
/// errors; checks |mean| <= 4/sqrt(N), |var - 1| <= 8/sqrt(N) and a finite
/// moment stable under halving the sample (within 20%).
ConditionCReport condition_c_report(const EnsembleSpec& spec, std::size_t samples);

}  // namespace prodlaw
