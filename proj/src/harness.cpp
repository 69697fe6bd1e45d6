#include "prodlaw/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <memory>
#include <mutex>
#include <numbers>
#include <sstream>

#include <Eigen/Core>
#include <json.hpp>

#include "prodlaw/errors.hpp"
#include "prodlaw/io.hpp"
#include "prodlaw/limits.hpp"
#include "prodlaw/parallel.hpp"
#include "prodlaw/potential.hpp"
#include "prodlaw/rng.hpp"
#include "prodlaw/specfun.hpp"
#include "prodlaw/spectra.hpp"

namespace prodlaw {

namespace {

using json = nlohmann::ordered_json;

constexpr const char* kVersion = "0.1.0";

const std::pair<TheoremTag, const char*> kTags[] = {
    {TheoremTag::MeanRate, "mean-rate"},         {TheoremTag::MeanRateBulk, "mean-rate-bulk"},
    {TheoremTag::MeanRateEdge, "mean-rate-edge"}, {TheoremTag::EsdRate, "esd-rate"},
    {TheoremTag::Universality, "universality"},  {TheoremTag::LocalLaw, "local-law"},
    {TheoremTag::GridApprox, "grid-approx"},
};

bool deterministic(TheoremTag t) {
  return t == TheoremTag::MeanRate || t == TheoremTag::MeanRateBulk || t == TheoremTag::MeanRateEdge;
}

double quantile(std::vector<double> v, double q) {
  std::sort(v.begin(), v.end());
  const double pos = q * (v.size() - 1);
  const std::size_t i = std::size_t(pos);
  if (i + 1 >= v.size()) return v.back();
  return v[i] + (pos - i) * (v[i + 1] - v[i]);
}

double bulk_radius(long n, int m) { return 1 - (m / 2.0) * std::sqrt(std::log(double(n)) / n); }

std::vector<cplx> local_law_grid(double tau) {
  std::vector<double> radii;
  for (double r : {0.5, 1.5})
    if (std::abs(1 - r) >= tau && r <= 1 + 1 / tau) radii.push_back(r);
  return ring_grid(radii, 16);
}

EnsembleSpec cell_spec(const ExperimentPlan& p, long n, int trial, std::uint64_t salt = 0) {
  EnsembleSpec s;
  s.m = p.m;
  s.n = int(n);
  s.law = p.law;
  s.seed = salt ? stream_key(p.seed, {std::uint64_t(n), std::uint64_t(trial), salt})
                : stream_key(p.seed, {std::uint64_t(n), std::uint64_t(trial)});
  return s;
}

void run_cell(const ExperimentPlan& p, CellResult& c, const GridApproxSetup* grid) {
  const long n = c.n;
  switch (p.tag) {
    case TheoremTag::MeanRate: {
      auto mu = mean_measure(int(n), p.m);
      const DistanceSup s = mean_distance_sup(*mu, mean_distance_floor(int(n), p.m), 2.0);
      c.statistic = s.value;
      c.argmax_radius = s.R_star;
      break;
    }
    case TheoremTag::MeanRateBulk: {
      auto mu = mean_measure(int(n), p.m);
      const double hi = bulk_radius(n, p.m);
      if (!(hi > 0)) throw DomainError("mean-rate-bulk: n too small for the bulk window");
      const DistanceSup s = mean_distance_sup(*mu, mean_distance_floor(int(n), p.m), hi);
      c.statistic = s.value;
      c.argmax_radius = s.R_star;
      break;
    }
    case TheoremTag::MeanRateEdge: {
      auto mu = mean_measure(int(n), p.m);
      for (double R : {1.2, 1.4}) {
        const double gap = mu->ball_complement(R);
        const double d = R - 1;
        const double ratio = gap / std::exp(-n * std::min(d * d, 1.0) / 3);
        if (ratio >= c.statistic) {
          c.statistic = ratio;
          c.argmax_radius = R;
        }
      }
      break;
    }
    case TheoremTag::EsdRate: {
      const Spectrum s = eigenvalues(sample_product(cell_spec(p, n, c.trial)).product);
      const BallDistanceStat d = radial_ks_distance(s, p.m);
      c.statistic = d.value;
      c.argmax_radius = d.argmax_radius;
      break;
    }
    case TheoremTag::Universality: {
      const Spectrum s = eigenvalues(sample_product(cell_spec(p, n, c.trial)).product);
      const BallDistanceStat d = ball_sup_distance(s, p.m, {FamilyKind::Bulk, p.tau});
      c.statistic = d.value;
      c.argmax_re = d.argmax_center.real();
      c.argmax_im = d.argmax_center.imag();
      c.argmax_radius = d.argmax_radius;
      break;
    }
    case TheoremTag::LocalLaw: {
      const auto zs = local_law_grid(p.tau);
      const LocalLawResult r = local_law_statistic(cell_spec(p, n, c.trial), zs, p.tau, 1);
      c.statistic = r.normalized[0];
      const auto it = std::max_element(r.per_z_max.begin(), r.per_z_max.end());
      const cplx z = zs[std::size_t(it - r.per_z_max.begin())];
      c.argmax_re = z.real();
      c.argmax_im = z.imag();
      break;
    }
    case TheoremTag::GridApprox: {
      const RandomGrid g = grid_approx_lattice(p, n, c.trial);
      const GridApproxResult r = grid_approximation(grid->eigenvalues, grid->f, g);
      c.statistic = std::abs(r.gap);
      c.argmax_re = g.shift_x;
      c.argmax_im = g.shift_y;
      break;
    }
  }
  if (!std::isfinite(c.statistic) || c.statistic < 0)
    throw PrecisionError("cell statistic is not a finite nonnegative number");
}

double normalized_constant(const ExperimentPlan& p, long n, double median) {
  const double ln = std::log(double(n));
  switch (p.tag) {
    case TheoremTag::MeanRate:
      return p.m == 1 ? std::sqrt(2 * std::numbers::pi * n) * median : std::sqrt(double(n) * p.m) * median;
    case TheoremTag::MeanRateBulk: return n * median / std::pow(ln, 1.5);
    case TheoremTag::EsdRate: return std::sqrt(n / ln) * median;
    case TheoremTag::GridApprox: return std::sqrt(double(n)) * median;
    default: return median;
  }
}

std::string fmt(double x) {
  std::ostringstream os;
  os.precision(4);
  os << x;
  return os.str();
}

void judge(RateReport& r) {
  const ExperimentPlan& p = r.plan;
  auto add = [&r](std::string name, bool pass, std::string detail) {
    r.verdicts.push_back({std::move(name), pass, std::move(detail)});
  };
  std::size_t failed = 0;
  for (const auto& c : r.cells) failed += !c.ok();
  add("cells", failed == 0, std::to_string(failed) + " of " + std::to_string(r.cells.size()) + " cells failed");
  if (r.per_n.empty()) return;

  auto slope_verdict = [&](const std::string& fit, double lo, double hi) {
    auto it = r.fits.find(fit);
    if (it == r.fits.end()) {
      add("slope", false, "no fit available");
      return;
    }
    add("slope", it->second.slope >= lo && it->second.slope <= hi,
        "slope " + fmt(it->second.slope) + " in [" + fmt(lo) + ", " + fmt(hi) + "]");
  };

  switch (p.tag) {
    case TheoremTag::MeanRate: {
      const double lo = p.m == 1 ? 0.9 : 0.32, hi = p.m == 1 ? 1.1 : 1.5;
      bool ok = true, window = true;
      std::string d, dw;
      for (const auto& q : r.per_n) {
        ok = ok && q.constant >= lo && q.constant <= hi;
        d += "n=" + std::to_string(q.n) + ": " + fmt(q.constant) + "; ";
      }
      add("constant-band", ok, d + "band [" + fmt(lo) + ", " + fmt(hi) + "]");
      if (p.m >= 2) {
        for (const auto& c : r.cells) {
          if (!c.ok()) continue;
          const double w = 3 * std::sqrt(std::log(double(c.n)) / c.n);
          window = window && std::abs(c.argmax_radius - 1) <= w;
          dw += "n=" + std::to_string(c.n) + ": |R*-1|=" + fmt(std::abs(c.argmax_radius - 1)) +
                " <= " + fmt(w) + "; ";
        }
        add("argmax-window", window, dw);
      }
      break;
    }
    case TheoremTag::MeanRateBulk: {
      const double c0 = r.per_n.front().constant;
      bool ok = true;
      std::string d = "C0=" + fmt(c0) + "; ";
      for (const auto& q : r.per_n) {
        ok = ok && q.constant <= 1.5 * c0;
        d += "n=" + std::to_string(q.n) + ": " + fmt(q.constant) + "; ";
      }
      add("envelope", ok, d);
      slope_verdict("log_removed", -1.2, -0.8);
      break;
    }
    case TheoremTag::MeanRateEdge: {
      double worst = 0;
      for (const auto& q : r.per_n) worst = std::max(worst, q.max);
      add("edge-bound", worst <= 1, "max gap/bound = " + fmt(worst));
      break;
    }
    case TheoremTag::EsdRate: {
      bool ok = true;
      std::string d;
      for (const auto& q : r.per_n) {
        std::size_t good = 0, total = 0;
        for (const auto& c : r.cells)
          if (c.n == q.n && c.ok()) {
            ++total;
            good += std::sqrt(c.n / std::log(double(c.n))) * c.statistic <= 2.0;
          }
        ok = ok && total > 0 && good >= 0.9 * total;
        d += "n=" + std::to_string(q.n) + ": " + std::to_string(good) + "/" + std::to_string(total) + "; ";
      }
      add("envelope", ok, d + "need >= 90% with sqrt(n/log n) KS <= 2");
      slope_verdict("raw", -0.65, -0.35);
      break;
    }
    case TheoremTag::Universality: {
      bool ok = true;
      std::string d;
      for (const auto& q : r.per_n) {
        double worst = 0;
        for (const auto& c : r.cells)
          if (c.n == q.n && c.ok()) worst = std::max(worst, c.statistic);
        ok = ok && q.reference > 0 && worst <= 3 * q.reference;
        d += "n=" + std::to_string(q.n) + ": max " + fmt(worst) + " vs 3 x " + fmt(q.reference) + "; ";
      }
      add("reference", ok, d);
      break;
    }
    case TheoremTag::LocalLaw: {
      const double ratio = r.per_n.back().median / r.per_n.front().median;
      add("non-growth", ratio <= 1.5, "median ratio " + fmt(ratio) + " <= 1.5");
      break;
    }
    case TheoremTag::GridApprox: {
      slope_verdict("raw", -0.65, -0.35);
      bool ok = true;
      std::string d;
      for (const auto& q : r.per_n) {
        std::size_t out = 0, total = 0;
        for (const auto& c : r.cells)
          if (c.n == q.n && c.ok()) {
            ++total;
            out += c.statistic > 5 * q.median;
          }
        const double frac = total ? double(out) / total : 1.0;
        ok = ok && frac <= 0.05;
        d += "M=" + std::to_string(q.n) + ": " + fmt(frac) + "; ";
      }
      add("outliers", ok, d + "fraction beyond 5x median <= 0.05");
      break;
    }
  }
}

json plan_json(const ExperimentPlan& p) {
  return json{{"tag", theorem_tag_name(p.tag)},
              {"n_grid", p.n_grid},
              {"m", p.m},
              {"trials", p.trials},
              {"tau", p.tau},
              {"seed", p.seed},
              {"law", entry_law_name(p.law)},
              {"cell_budget_seconds", p.cell_budget_seconds},
              {"grid_sample_n", p.grid_sample_n}};
}

}  // namespace

TheoremTag parse_theorem_tag(const std::string& name) {
  for (auto [t, s] : kTags)
    if (name == s) return t;
  throw DomainError("unknown plan tag '" + name + "'");
}

std::string theorem_tag_name(TheoremTag tag) {
  for (auto [t, s] : kTags)
    if (t == tag) return s;
  return "?";
}

void ExperimentPlan::validate() const {
  if (n_grid.empty()) throw DomainError("plan: n_grid is empty");
  for (std::size_t i = 0; i < n_grid.size(); ++i) {
    if (n_grid[i] < 1) throw DomainError("plan: n_grid entries must be positive");
    if (i > 0 && n_grid[i] <= n_grid[i - 1]) throw DomainError("plan: n_grid must be strictly increasing");
  }
  if (trials < 1) throw DomainError("plan: trials must be >= 1");
  if (m < 1) throw DomainError("plan: m must be >= 1");
  if ((tag == TheoremTag::Universality || tag == TheoremTag::LocalLaw) && !(tau > 0 && tau < 1))
    throw DomainError("plan: tau must lie in (0, 1)");
  if (tag == TheoremTag::LocalLaw && local_law_grid(tau).empty())
    throw DomainError("plan: no local-law grid ring is admissible for this tau");
  if (tag == TheoremTag::GridApprox && grid_sample_n < 1)
    throw DomainError("plan: grid_sample_n must be positive");
  if (cell_budget_seconds < 0) throw DomainError("plan: negative cell budget");
}

bool RateReport::pass() const {
  return !verdicts.empty() &&
         std::all_of(verdicts.begin(), verdicts.end(), [](const Verdict& v) { return v.pass; });
}

GridApproxSetup grid_approx_setup(const ExperimentPlan& p) {
  EnsembleSpec s;
  s.m = p.m;
  s.n = p.grid_sample_n;
  s.law = p.law;
  s.seed = stream_key(p.seed, {0x67726964});
  const Linearization lin = build_linearization(sample_product(s));
  GridApproxSetup g;
  g.eigenvalues = eigenvalues(lin.W).eigenvalues;
  const MollifiedIndicator f{cplx(0.3, 0.1), 0.5, 8, MollifierSide::Inner};
  g.f = as_test_function(compose_power(f, p.m));
  return g;
}

RandomGrid grid_approx_lattice(const ExperimentPlan& p, long M, int shift) {
  if (M < 1) throw DomainError("grid_approx_lattice: M must be positive");
  return make_random_grid(7, std::size_t(M), stream_key(p.seed, {std::uint64_t(M)}), std::uint64_t(shift));
}

double median_of(std::vector<double> v) {
  if (v.empty()) return 0;
  std::sort(v.begin(), v.end());
  const std::size_t k = v.size() / 2;
  return v.size() % 2 ? v[k] : 0.5 * (v[k - 1] + v[k]);
}

RateFit fit_rate(std::span<const std::pair<double, double>> pairs) {
  if (pairs.size() < 2) throw DomainError("fit_rate: need at least two points");
  double sx = 0, sy = 0;
  for (auto [n, s] : pairs) {
    if (!(n > 0)) throw DomainError("fit_rate: abscissae must be positive");
    if (!(s > 0) || !std::isfinite(s)) throw DomainError("fit_rate: statistics must be positive");
    sx += std::log(n);
    sy += std::log(s);
  }
  const double k = double(pairs.size());
  const double mx = sx / k, my = sy / k;
  double sxx = 0, sxy = 0;
  for (auto [n, s] : pairs) {
    const double dx = std::log(n) - mx;
    sxx += dx * dx;
    sxy += dx * (std::log(s) - my);
  }
  if (!(sxx > 0)) throw DomainError("fit_rate: abscissae must not all coincide");
  RateFit f;
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  double ss = 0;
  for (auto [n, s] : pairs) {
    const double e = std::log(s) - (f.intercept + f.slope * std::log(n));
    ss += e * e;
  }
  f.residual = std::sqrt(ss / k);
  return f;
}

RateReport run_plan(const ExperimentPlan& plan) {
  plan.validate();
  RateReport rep;
  rep.plan = plan;
  const int trials = deterministic(plan.tag) ? 1 : plan.trials;
  rep.plan.trials = trials;
  for (long n : plan.n_grid)
    for (int t = 0; t < trials; ++t) {
      CellResult c;
      c.n = n;
      c.trial = t;
      rep.cells.push_back(c);
    }

  std::unique_ptr<GridApproxSetup> grid;
  if (plan.tag == TheoremTag::GridApprox) grid = std::make_unique<GridApproxSetup>(grid_approx_setup(plan));

  std::mutex budget_mu;
  std::map<long, double> spent;
  using clock = std::chrono::steady_clock;
  parallel_for(rep.cells.size(), [&](std::size_t i) {
    CellResult& c = rep.cells[i];
    if (plan.cell_budget_seconds > 0) {
      std::lock_guard lock(budget_mu);
      if (spent[c.n] > plan.cell_budget_seconds) {
        c.status = "skipped";
        return;
      }
    }
    const auto t0 = clock::now();
    try {
      run_cell(plan, c, grid.get());
    } catch (const std::exception& e) {
      c.status = std::string("error: ") + e.what();
    }
    if (plan.cell_budget_seconds > 0) {
      std::lock_guard lock(budget_mu);
      spent[c.n] += std::chrono::duration<double>(clock::now() - t0).count();
    }
  });

  // Ginibre reference for universality, same n and trial count.
  std::map<long, double> reference;
  if (plan.tag == TheoremTag::Universality) {
    std::vector<double> ref(rep.cells.size(), -1);
    parallel_for(rep.cells.size(), [&](std::size_t i) {
      const CellResult& c = rep.cells[i];
      EnsembleSpec s = cell_spec(plan, c.n, c.trial, 1);
      s.law = EntryLaw::ComplexGaussian;
      try {
        ref[i] = ball_sup_distance(eigenvalues(sample_product(s).product), plan.m,
                                   {FamilyKind::Bulk, plan.tau})
                     .value;
      } catch (const std::exception&) {
      }
    });
    for (long n : plan.n_grid) {
      std::vector<double> v;
      for (std::size_t i = 0; i < rep.cells.size(); ++i)
        if (rep.cells[i].n == n && ref[i] >= 0) v.push_back(ref[i]);
      reference[n] = median_of(v);
    }
  }

  for (long n : plan.n_grid) {
    std::vector<double> v;
    PerN q;
    q.n = n;
    for (const auto& c : rep.cells)
      if (c.n == n) {
        ++q.cells;
        if (c.ok())
          v.push_back(c.statistic);
        else
          ++q.failures;
      }
    if (!v.empty()) {
      q.median = median_of(v);
      q.q10 = quantile(v, 0.1);
      q.q90 = quantile(v, 0.9);
      q.min = *std::min_element(v.begin(), v.end());
      q.max = *std::max_element(v.begin(), v.end());
      q.constant = normalized_constant(plan, n, q.median);
    }
    q.reference = reference.count(n) ? reference[n] : 0.0;
    rep.per_n.push_back(q);
  }

  std::vector<std::pair<double, double>> raw, adjusted;
  for (const auto& q : rep.per_n)
    if (q.median > 0 && q.failures < q.cells) {
      raw.push_back({double(q.n), q.median});
      adjusted.push_back({double(q.n), q.median / std::pow(std::log(double(q.n)), 1.5)});
    }
  if (raw.size() >= 2) {
    rep.fits["raw"] = fit_rate(raw);
    if (plan.tag == TheoremTag::MeanRateBulk) rep.fits["log_removed"] = fit_rate(adjusted);
  }
  judge(rep);
  if (!plan.output.empty()) emit_report(rep, plan.output);
  return rep;
}

std::string report_csv(const RateReport& r) {
  std::ostringstream os;
  os << "n,trial,statistic,argmax_re,argmax_im,argmax_radius,status\n";
  for (const auto& c : r.cells) {
    std::string status = c.status;
    std::replace(status.begin(), status.end(), ',', ';');
    std::replace(status.begin(), status.end(), '\n', ' ');
    os << c.n << ',' << c.trial << ',' << format_double(c.statistic) << ','
       << format_double(c.argmax_re) << ',' << format_double(c.argmax_im) << ','
       << format_double(c.argmax_radius) << ',' << status << '\n';
  }
  return os.str();
}

std::string report_json(const RateReport& r) {
  json per_n = json::array();
  for (const auto& q : r.per_n)
    per_n.push_back({{"n", q.n},
                     {"cells", q.cells},
                     {"failures", q.failures},
                     {"median", q.median},
                     {"q10", q.q10},
                     {"q90", q.q90},
                     {"min", q.min},
                     {"max", q.max},
                     {"constant", q.constant},
                     {"reference", q.reference}});
  json fits = json::object();
  for (const auto& [name, f] : r.fits)
    fits[name] = {{"slope", f.slope}, {"intercept", f.intercept}, {"residual", f.residual}};
  json verdicts = json::array();
  for (const auto& v : r.verdicts)
    verdicts.push_back({{"name", v.name}, {"pass", v.pass}, {"detail", v.detail}});
  json j{{"plan", plan_json(r.plan)},
         {"seed", r.plan.seed},
         {"per_n", per_n},
         {"fits", fits},
         {"verdicts", verdicts},
         {"pass", r.pass()},
         {"versions",
          {{"prodlaw", kVersion},
           {"eigen", std::to_string(EIGEN_WORLD_VERSION) + "." + std::to_string(EIGEN_MAJOR_VERSION) +
                         "." + std::to_string(EIGEN_MINOR_VERSION)}}}};
  return j.dump(2) + "\n";
}

void emit_report(const RateReport& r, const std::filesystem::path& dir) {
  const std::string base = theorem_tag_name(r.plan.tag);
  write_text(dir / (base + ".csv"), report_csv(r));
  write_text(dir / (base + ".json"), report_json(r));
}

std::vector<CellResult> parse_report_csv(const std::filesystem::path& path) {
  const CsvTable t = read_csv(path);
  std::vector<CellResult> out;
  const std::size_t status = t.column("status");
  for (std::size_t i = 0; i < t.rows.size(); ++i) {
    CellResult c;
    c.n = long(t.number(i, "n"));
    c.trial = int(t.number(i, "trial"));
    c.statistic = t.number(i, "statistic");
    c.argmax_re = t.number(i, "argmax_re");
    c.argmax_im = t.number(i, "argmax_im");
    c.argmax_radius = t.number(i, "argmax_radius");
    c.status = t.rows[i][status];
    out.push_back(c);
  }
  return out;
}

}  // namespace prodlaw
