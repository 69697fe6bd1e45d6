// prodlaw: command line front end of the library.
// Exit codes: 0 success, 2 verdict failure, 1 execution error.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "prodlaw/errors.hpp"
#include "prodlaw/harness.hpp"
#include "prodlaw/io.hpp"
#include "prodlaw/limits.hpp"
#include "prodlaw/potential.hpp"
#include "prodlaw/rng.hpp"
#include "prodlaw/specfun.hpp"
#include "prodlaw/spectra.hpp"

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;
using namespace prodlaw;

namespace {

struct Common {
  int m = 1;
  int n = 64;
  std::vector<long> n_grid;
  int trials = 1;
  double tau = 0.2;
  std::uint64_t seed = 0;
  std::string ensemble = "complex-gaussian";
  std::string out = ".";
  std::string format = "csv";
};

void add_common(CLI::App* sub, Common& c) {
  sub->add_option("--m", c.m, "number of factors")->check(CLI::PositiveNumber);
  sub->add_option("--n", c.n, "matrix size")->check(CLI::PositiveNumber);
  sub->add_option("--n-grid", c.n_grid, "comma separated sizes")->delimiter(',');
  sub->add_option("--trials", c.trials, "independent trials")->check(CLI::PositiveNumber);
  sub->add_option("--tau", c.tau, "bulk / annulus margin");
  sub->add_option("--seed", c.seed, "master seed");
  sub->add_option("--ensemble", c.ensemble, "entry law");
  sub->add_option("--out", c.out, "output directory");
  sub->add_option("--format", c.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
}

fs::path out_file(const Common& c, const std::string& stem) {
  return fs::path(c.out) / (stem + "." + c.format);
}

void write_rows_json(const fs::path& path, const CsvTable& t) {
  json arr = json::array();
  for (const auto& row : t.rows) {
    json o;
    for (std::size_t i = 0; i < t.header.size(); ++i) {
      try {
        std::size_t pos = 0;
        const double v = std::stod(row[i], &pos);
        if (pos == row[i].size()) {
          o[t.header[i]] = v;
          continue;
        }
      } catch (const std::exception&) {
      }
      o[t.header[i]] = row[i];
    }
    arr.push_back(o);
  }
  write_text(path, arr.dump(2) + "\n");
}

void write_table(const Common& c, const std::string& stem, const CsvTable& t) {
  const fs::path p = out_file(c, stem);
  if (c.format == "json")
    write_rows_json(p, t);
  else
    write_csv(p, t);
  std::cout << p.string() << "\n";
}

int finish_report(const RateReport& r) {
  for (const auto& v : r.verdicts)
    std::cout << (v.pass ? "PASS " : "FAIL ") << v.name << ": " << v.detail << "\n";
  return r.pass() ? 0 : 2;
}

ExperimentPlan plan_from(const Common& c, TheoremTag tag) {
  ExperimentPlan p;
  p.tag = tag;
  p.n_grid = c.n_grid.empty() ? std::vector<long>{c.n} : c.n_grid;
  p.m = c.m;
  p.trials = c.trials;
  p.tau = c.tau;
  p.seed = c.seed;
  p.law = parse_entry_law(c.ensemble);
  p.output = c.out;
  return p;
}

BallFamily parse_family(const std::string& s, double tau) {
  if (s == "centered") return {FamilyKind::Centered, 0};
  if (s == "bulk") return {FamilyKind::Bulk, tau};
  if (s == "annulus") return {FamilyKind::AnnulusAvoiding, tau};
  throw DomainError("unknown ball family '" + s + "' (centered, bulk, annulus)");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Convergence-rate toolkit for products of non-Hermitian random matrices"};
  app.require_subcommand(1);

  // density
  Common dc;
  double r_max = 1.5;
  int points = 151;
  auto* density = app.add_subcommand("density", "finite-n mean density and limit density on a radial grid");
  add_common(density, dc);
  density->add_option("--r-max", r_max, "largest |z|");
  density->add_option("--points", points, "grid points")->check(CLI::Range(2, 100000));

  // mean-distance
  Common mc;
  auto* mean_dist = app.add_subcommand("mean-distance", "exact sup distance of the mean measure (mean-rate plan)");
  add_common(mean_dist, mc);
  bool bulk_only = false, edge = false;
  mean_dist->add_flag("--bulk", bulk_only, "restrict to R < 1 - (m/2) sqrt(log n / n)");
  mean_dist->add_flag("--edge", edge, "edge decay check at R = 1.2, 1.4");

  // contour-check
  Common cc;
  std::vector<double> radii{0.5, 1.0, 1.5};
  double tol = 1e-6;
  auto* contour = app.add_subcommand("contour-check", "series vs double-contour mean ball measure");
  add_common(contour, cc);
  contour->add_option("--R", radii, "radii")->delimiter(',');
  contour->add_option("--tol", tol, "relative tolerance");
  std::string nodes_x;
  contour->add_option("--dump-nodes", nodes_x, "also dump Meijer G quadrature nodes at this x");

  // esd
  Common ec;
  bool dump_matrix = false;
  auto* esd = app.add_subcommand("esd", "sample products and write their spectra");
  add_common(esd, ec);
  esd->add_flag("--matrix", dump_matrix, "also write the product matrices (binary)");

  // ball-sup
  Common bc;
  std::string family = "bulk";
  auto* ball = app.add_subcommand("ball-sup", "ball discrepancy of sampled spectra");
  add_common(ball, bc);
  ball->add_option("--family", family, "centered, bulk or annulus");

  // bernoulli
  Common brc;
  double bern_R = 0.8;
  bool compare = false;
  auto* bern = app.add_subcommand("bernoulli", "counts in B_R(0) from the Bernoulli representation");
  add_common(bern, brc);
  bern->add_option("--R", bern_R, "radius");
  bern->add_flag("--compare", compare, "also count eigenvalues of Ginibre products and report TV");

  // potential
  Common pc;
  std::string form = "eigenvalue";
  int per_ring = 16;
  std::vector<double> rings{0.5, 1.5};
  auto* pot = app.add_subcommand("potential", "logarithmic potential of the linearization");
  add_common(pot, pc);
  pot->add_option("--form", form, "eigenvalue or singular")->check(CLI::IsMember({"eigenvalue", "singular"}));
  pot->add_option("--rings", rings, "ring radii")->delimiter(',');
  pot->add_option("--per-ring", per_ring, "points per ring")->check(CLI::PositiveNumber);

  // grid-approx
  Common gc;
  std::vector<long> Ms{1000, 10000, 100000, 1000000};
  auto* grid = app.add_subcommand("grid-approx", "random lattice approximation of the Poisson identity");
  add_common(grid, gc);
  grid->add_option("--M", Ms, "lattice sizes")->delimiter(',');

  // rate-fit
  std::string fit_input;
  auto* fit = app.add_subcommand("rate-fit", "log-log fit of a CSV with columns n, statistic");
  fit->add_option("--input", fit_input, "CSV file")->required();

  // report
  Common rc;
  std::string plan_tag = "mean-rate";
  double budget = 0;
  auto* report = app.add_subcommand("report", "run an experiment plan and emit CSV + JSON");
  add_common(report, rc);
  report->add_option("--plan", plan_tag, "plan tag");
  report->add_option("--budget", budget, "per-n time budget in seconds (0 = none)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*density) {
      CsvTable t{{"r", "mean", "limit"}, {}};
      auto mu = mean_measure(dc.n, dc.m);
      for (int i = 0; i < points; ++i) {
        const double r = r_max * (i + 1) / points;
        t.rows.push_back({format_double(r), format_double(mu->density(r)),
                          format_double(r < 1 ? limit_density(r, dc.m) : 0.0)});
      }
      write_table(dc, "density_n" + std::to_string(dc.n) + "_m" + std::to_string(dc.m), t);
      return 0;
    }
    if (*mean_dist) {
      const TheoremTag tag = edge ? TheoremTag::MeanRateEdge
                                  : bulk_only ? TheoremTag::MeanRateBulk : TheoremTag::MeanRate;
      return finish_report(run_plan(plan_from(mc, tag)));
    }
    if (*contour) {
      CsvTable t{{"n", "m", "R", "series", "contour", "table", "rel_gap"}, {}};
      bool ok = true;
      const auto ns = cc.n_grid.empty() ? std::vector<long>{cc.n} : cc.n_grid;
      for (long n : ns)
        for (double R : radii) {
          const double s = mean_ball_measure_series(R, int(n), cc.m);
          const double c = mean_ball_measure_contour(R, int(n), cc.m);
          const double tb = mean_ball_measure(R, int(n), cc.m);
          const double gap = std::abs(s - c) / std::abs(s);
          ok = ok && gap <= tol;
          t.rows.push_back({std::to_string(n), std::to_string(cc.m), format_double(R), format_double(s),
                            format_double(c), format_double(tb), format_double(gap)});
        }
      write_table(cc, "contour_check_m" + std::to_string(cc.m), t);
      if (!nodes_x.empty()) {
        const auto nodes = meijer_g_nodes(std::stod(nodes_x), {double(cc.m)});
        const fs::path p = fs::path(cc.out) / ("meijer_nodes_m" + std::to_string(cc.m) + ".csv");
        write_nodes_csv(p, nodes);
        std::cout << p.string() << "\n";
      }
      return ok ? 0 : 2;
    }
    if (*esd) {
      std::vector<Matrix> mats;
      for (int t = 0; t < ec.trials; ++t) {
        EnsembleSpec s{ec.m, ec.n, parse_entry_law(ec.ensemble), stream_key(ec.seed, {std::uint64_t(t)})};
        const ProductSample ps = sample_product(s);
        const Spectrum sp = eigenvalues(ps.product);
        CsvTable tb{{"re", "im", "modulus"}, {}};
        for (cplx z : sp.eigenvalues)
          tb.rows.push_back({format_double(z.real()), format_double(z.imag()), format_double(std::abs(z))});
        write_table(ec, "spectrum_" + std::to_string(t), tb);
        if (dump_matrix) mats.push_back(ps.product);
      }
      if (dump_matrix) {
        const fs::path p = fs::path(ec.out) / "products.plawmat";
        write_matrices_binary(p, mats);
        std::cout << p.string() << "\n";
      }
      return 0;
    }
    if (*ball) {
      const BallFamily fam = parse_family(family, bc.tau);
      CsvTable t{{"trial", "statistic", "signed", "center_re", "center_im", "radius", "converged"}, {}};
      for (int tr = 0; tr < bc.trials; ++tr) {
        EnsembleSpec s{bc.m, bc.n, parse_entry_law(bc.ensemble), stream_key(bc.seed, {std::uint64_t(tr)})};
        const Spectrum sp = eigenvalues(sample_product(s).product);
        const BallSupCheck ch = ball_sup_distance_checked(sp, bc.m, fam);
        const BallDistanceStat& d = ch.fine;
        t.rows.push_back({std::to_string(tr), format_double(d.value), format_double(d.signed_value),
                          format_double(d.argmax_center.real()), format_double(d.argmax_center.imag()),
                          format_double(d.argmax_radius), ch.converged ? "1" : "0"});
      }
      write_table(bc, "ball_sup_" + family, t);
      return 0;
    }
    if (*bern) {
      const auto counts = bernoulli_count_sample(brc.n, brc.m, bern_R, brc.trials, brc.seed);
      const fs::path p = fs::path(brc.out) / "bernoulli_counts.csv";
      write_counts_csv(p, counts);
      std::cout << p.string() << "\n";
      if (!compare) return 0;
      std::vector<int> eig(brc.trials);
      for (int t = 0; t < brc.trials; ++t) {
        EnsembleSpec s{brc.m, brc.n, EntryLaw::ComplexGaussian,
                       stream_key(brc.seed, {std::uint64_t(t), 0x6569})};
        const Spectrum sp = eigenvalues(sample_product(s).product);
        eig[t] = int(std::count_if(sp.sorted_moduli.begin(), sp.sorted_moduli.end(),
                                   [&](double r) { return r < bern_R; }));
      }
      const fs::path pe = fs::path(brc.out) / "eigen_counts.csv";
      write_counts_csv(pe, eig);
      std::vector<double> ha(brc.n + 1, 0), hb(brc.n + 1, 0);
      for (int c : counts) ha[c] += 1.0 / brc.trials;
      for (int c : eig) hb[c] += 1.0 / brc.trials;
      double tv = 0;
      for (int k = 0; k <= brc.n; ++k) tv += 0.5 * std::abs(ha[k] - hb[k]);
      std::cout << pe.string() << "\nTV " << tv << "\n";
      return 0;
    }
    if (*pot) {
      EnsembleSpec s{pc.m, pc.n, parse_entry_law(pc.ensemble), pc.seed};
      const Linearization lin = build_linearization(sample_product(s));
      const auto zs = ring_grid(rings, per_ring);
      const PotentialField f = log_potential_empirical(
          lin, zs, form == "singular" ? PotentialForm::Singular : PotentialForm::Eigenvalue);
      const fs::path p = fs::path(pc.out) / ("potential_" + form + ".csv");
      write_potential_csv(p, f);
      std::cout << p.string() << "\n";
      std::size_t flagged = 0;
      for (char fl : f.flagged) flagged += fl;
      if (flagged) std::cerr << flagged << " point(s) within 1e-12 of the spectrum\n";
      if (!f.s_min.empty()) {
        // empirical s_min(W - z) distribution over the grid
        CsvTable t{{"re", "im", "s_min"}, {}};
        for (std::size_t i = 0; i < zs.size(); ++i)
          t.rows.push_back({format_double(zs[i].real()), format_double(zs[i].imag()),
                            format_double(f.s_min[i])});
        const fs::path ps = fs::path(pc.out) / "potential_singular_smin.csv";
        write_csv(ps, t);
        std::vector<double> v = f.s_min;
        std::sort(v.begin(), v.end());
        std::cout << ps.string() << "\ns_min min " << v.front() << " median " << median_of(v)
                  << " max " << v.back() << "\n";
      }
      return 0;
    }
    if (*grid) {
      ExperimentPlan p = plan_from(gc, TheoremTag::GridApprox);
      p.n_grid = Ms;
      p.grid_sample_n = gc.n;
      p.output.clear();
      const GridApproxSetup setup = grid_approx_setup(p);
      json arr = json::array();
      for (long M : Ms)
        for (int t = 0; t < gc.trials; ++t) {
          const GridApproxResult g = grid_approximation(setup.eigenvalues, setup.f, grid_approx_lattice(p, M, t));
          arr.push_back({{"M", g.M},
                         {"shift", {g.shift_x, g.shift_y}},
                         {"lhs", g.lhs},
                         {"rhs", g.rhs},
                         {"gap", g.gap}});
        }
      write_text(fs::path(gc.out) / "grid_approx.json", arr.dump(2) + "\n");
      p.output = gc.out;
      const RateReport r = run_plan(p);
      return finish_report(r);
    }
    if (*fit) {
      const CsvTable t = read_csv(fit_input);
      std::vector<std::pair<double, double>> pairs;
      for (std::size_t i = 0; i < t.rows.size(); ++i)
        pairs.push_back({t.number(i, "n"), t.number(i, "statistic")});
      const RateFit f = fit_rate(pairs);
      std::cout << json{{"slope", f.slope}, {"intercept", f.intercept}, {"residual", f.residual}}.dump(2)
                << "\n";
      return 0;
    }
    if (*report) {
      ExperimentPlan p = plan_from(rc, parse_theorem_tag(plan_tag));
      p.cell_budget_seconds = budget;
      return finish_report(run_plan(p));
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
