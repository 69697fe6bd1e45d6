#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "prodlaw/ensembles.hpp"
#include "prodlaw/potential.hpp"

namespace prodlaw {

enum class TheoremTag { MeanRate, MeanRateBulk, MeanRateEdge, EsdRate, Universality, LocalLaw, GridApprox };

/// mean-rate, mean-rate-bulk, mean-rate-edge, esd-rate, universality,
/// local-law, grid-approx.
TheoremTag parse_theorem_tag(const std::string& name);
std::string theorem_tag_name(TheoremTag tag);

/// One sweep.  For grid-approx, n_grid holds the lattice sizes M and trials
/// the number of random shifts; the potential comes from one sample of the
/// linearization with n = grid_sample_n.
struct ExperimentPlan {
  TheoremTag tag = TheoremTag::MeanRate;
  std::vector<long> n_grid;
  int m = 1;
  int trials = 1;
  double tau = 0.2;
  std::uint64_t seed = 0;
  EntryLaw law = EntryLaw::ComplexGaussian;
  std::string output;               // directory; empty = do not emit
  double cell_budget_seconds = 0;   // 0 = unlimited
  int grid_sample_n = 64;

  /// Throws DomainError on an invalid plan.
  void validate() const;
};

struct CellResult {
  long n = 0;
  int trial = 0;
  double statistic = 0;
  double argmax_re = 0, argmax_im = 0, argmax_radius = 0;
  std::string status = "ok";  // ok | skipped | error: ...
  bool ok() const { return status == "ok"; }
};

struct PerN {
  long n = 0;
  std::size_t cells = 0, failures = 0;
  double median = 0, q10 = 0, q90 = 0, min = 0, max = 0;
  double constant = 0;   // tag-specific normalization of the median
  double reference = 0;  // universality: Ginibre median at the same n
};

struct RateFit {
  double slope = 0;
  double intercept = 0;
  double residual = 0;
};

struct Verdict {
  std::string name;
  bool pass = false;
  std::string detail;
};

struct RateReport {
  ExperimentPlan plan;
  std::vector<CellResult> cells;  // ordered by (n, trial)
  std::vector<PerN> per_n;
  std::map<std::string, RateFit> fits;
  std::vector<Verdict> verdicts;
  bool pass() const;
};

/// Least squares of log(statistic) on log(n); residual is the RMS error.
/// Needs at least two pairs and positive values.
RateFit fit_rate(std::span<const std::pair<double, double>> pairs);

/// Runs every (n, trial) cell on the work pool, aggregates and judges.
/// Cell failures are recorded, not thrown.  Writes the report when
/// plan.output is set.
RateReport run_plan(const ExperimentPlan& plan);

/// <dir>/<tag>.csv (n, trial, statistic, argmax_re, argmax_im, argmax_radius,
/// status) and <dir>/<tag>.json (plan echo, per-n table, fits, verdicts).
void emit_report(const RateReport& report, const std::filesystem::path& dir);

std::string report_json(const RateReport& report);
std::string report_csv(const RateReport& report);

/// Parses report_csv output back into cells.
std::vector<CellResult> parse_report_csv(const std::filesystem::path& path);

/// Fixed grid-approx configuration: eigenvalues of one linearization sample
/// (n = grid_sample_n) and f~ for the inner mollified indicator of
/// B_{1/2}(0.3 + 0.1i) with a = 8.
struct GridApproxSetup {
  std::vector<cplx> eigenvalues;
  SmoothTestFunction f;
};
GridApproxSetup grid_approx_setup(const ExperimentPlan& plan);
/// Lattice of size M with the given shift index (beta = 7).
RandomGrid grid_approx_lattice(const ExperimentPlan& plan, long M, int shift);

/// Median of the values (0 for an empty input).
double median_of(std::vector<double> v);

}  // namespace prodlaw
