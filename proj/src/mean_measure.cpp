#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <mutex>
#include <numbers>
#include <string>
#include <vector>

#include "prodlaw/errors.hpp"
#include "prodlaw/quadrature.hpp"
#include "prodlaw/specfun.hpp"

namespace prodlaw {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();
constexpr double kProfileCut = -57.6;  // log(1e-25): where the table stops

void check_nm(int n, int m) {
  if (n < 1) throw DomainError("mean measure: n must be >= 1");
  if (m < 1) throw DomainError("mean measure: m must be >= 1");
}

}  // namespace

MeanSpectralMeasure::MeanSpectralMeasure(int n, int m, double panel_width)
    : n_(n), m_(m), panel_width_(panel_width) {
  check_nm(n, m);
  if (!(panel_width > 0) || panel_width > 1)
    throw DomainError("MeanSpectralMeasure: panel width must lie in (0, 1]");
  lgf_.resize(n + 1);
  for (int k = 0; k <= n; ++k) lgf_[k] = std::lgamma(k + 1.0);
}

void MeanSpectralMeasure::build_table() const {
  const double panel_width = panel_width_;

  edges_.push_back(0);
  if (m_ >= 2) {
    // log singularity of G at 0: geometric grading
    for (int j = 12; j >= 1; --j) edges_.push_back(panel_width * std::pow(4.0, -j));
  }
  double t = panel_width;
  edges_.push_back(t);
  while (t < n_ || log_radial_density(t) > kProfileCut) {
    t += panel_width;
    edges_.push_back(t);
  }
  t_end_ = t;

  const std::size_t np = edges_.size() - 1;
  std::vector<double> mass(np);
  for (std::size_t j = 0; j < np; ++j) mass[j] = panel_integral(edges_[j], edges_[j + 1]);
  cum_.assign(np + 1, 0.0);
  for (std::size_t j = 0; j < np; ++j) cum_[j + 1] = cum_[j] + mass[j];
  suf_.assign(np + 1, 0.0);
  for (std::size_t j = np; j-- > 0;) suf_[j] = suf_[j + 1] + mass[j];
  tail_end_ = tail_beyond(t_end_);
  total_ = cum_[np] + tail_end_;
}

double MeanSpectralMeasure::log_S(double log_x) const {
  // log sum_{k<n} x^k / k!^m; terms peak near k = x^{1/m}.
  const double peak = std::exp(log_x / m_);
  const double kc = std::clamp(peak, 0.0, double(n_ - 1));
  const double width = 15 * std::sqrt(kc + 1) + 30;
  const int lo = std::max(0, int(std::floor(kc - width)));
  const int hi = std::min(n_ - 1, int(std::ceil(kc + width)));
  double best = kNegInf;
  for (int k = lo; k <= hi; ++k) best = std::max(best, k * log_x - m_ * lgf_[k]);
  double s = 0;
  for (int k = lo; k <= hi; ++k) s += std::exp(k * log_x - m_ * lgf_[k] - best);
  return best + std::log(s);
}

double MeanSpectralMeasure::log_radial_density(double t) const {
  if (t < 0) throw DomainError("log_radial_density: t must be nonnegative");
  if (t == 0) return m_ == 1 ? -std::log(double(n_)) : kNegInf;
  const double lt = std::log(t);
  const double lx = m_ * lt;
  const double lg = meijer_g_log(std::exp(lx), {double(m_)}).log_magnitude;
  return std::log(double(m_)) + (m_ - 1) * lt + lg + log_S(lx) - std::log(double(n_));
}

double MeanSpectralMeasure::density(double abs_z) const {
  if (abs_z < 0) throw DomainError("mean_density: |z| must be nonnegative");
  if (abs_z == 0) {
    if (m_ >= 2) throw DomainError("mean_density: density diverges at z = 0 for m >= 2");
    return 1 / std::numbers::pi;
  }
  const double lx = m_ * std::log(double(n_)) + 2 * std::log(abs_z);
  const double lg = meijer_g_log(std::exp(lx), {double(m_)}).log_magnitude;
  const double v = std::exp((m_ - 1) * std::log(double(n_)) - std::log(std::numbers::pi) + lg +
                            log_S(lx));
  if (!std::isfinite(v)) throw PrecisionError("mean_density: overflow");
  return v;
}

double MeanSpectralMeasure::panel_integral(double a, double b) const {
  if (!(b > a)) return 0;
  const GaussRule& g = gauss_legendre(16);
  const double h = 0.5 * (b - a), c = 0.5 * (a + b);
  double s = 0;
  for (int i = 0; i < 16; ++i) s += g.weights[i] * std::exp(log_radial_density(c + h * g.nodes[i]));
  return s * h;
}

double MeanSpectralMeasure::tail_beyond(double t0) const {
  const double l0 = log_radial_density(t0);
  if (l0 == kNegInf) return 0;
  std::vector<double> breaks{t0};
  const double step = std::max(1.0, std::sqrt(t0 / m_));
  double off = step;
  for (int i = 0; i < 60; ++i) {
    breaks.push_back(t0 + off);
    if (log_radial_density(t0 + off) < l0 - 80) break;
    off *= 2;
  }
  const double lv = integrate_log_positive(
      [this](double t) { return log_radial_density(t); }, breaks, 1e-10);
  return std::exp(lv);
}

double MeanSpectralMeasure::normalization_error() const {
  ensure_table();
  return total_ - 1.0;
}

double MeanSpectralMeasure::t_end() const {
  ensure_table();
  return t_end_;
}

double MeanSpectralMeasure::ball_measure(double R) const {
  if (!(R >= 0)) throw DomainError("mean_ball_measure: R must be nonnegative");
  if (R == 0) return 0;
  ensure_table();
  if (std::isinf(R)) return total_;
  const double T = n_ * std::exp((2.0 / m_) * std::log(R));
  if (T >= t_end_) return cum_.back() + tail_end_ - tail_beyond(T);
  const std::size_t j = std::upper_bound(edges_.begin(), edges_.end(), T) - edges_.begin() - 1;
  return cum_[j] + panel_integral(edges_[j], T);
}

double MeanSpectralMeasure::ball_complement(double R) const {
  if (!(R >= 0)) throw DomainError("mean_ball_measure: R must be nonnegative");
  ensure_table();
  if (R == 0) return total_;
  if (std::isinf(R)) return 0;
  const double T = n_ * std::exp((2.0 / m_) * std::log(R));
  if (T >= t_end_) return tail_beyond(T);
  const std::size_t j = std::upper_bound(edges_.begin(), edges_.end(), T) - edges_.begin() - 1;
  return panel_integral(T, edges_[j + 1]) + suf_[j + 1] + tail_end_;
}

double MeanSpectralMeasure::eta(int k, double R) const {
  if (k < 0) throw DomainError("eta_k: k must be nonnegative");
  if (!(R >= 0)) throw DomainError("eta_k: R must be nonnegative");
  if (R == 0) return 0;
  if (std::isinf(R)) return 1;
  {
    std::lock_guard lock(cache_mu_);
    auto it = eta_cache_.find({k, R});
    if (it != eta_cache_.end()) return it->second;
  }
  const double T = n_ * std::exp((2.0 / m_) * std::log(R));
  const double lkf = std::lgamma(k + 1.0);
  const double m = m_;
  auto log_f = [&](double t) {
    if (t <= 0) return kNegInf;
    const double lt = std::log(t);
    const double lg = meijer_g_log(std::exp(m * lt), {m}).log_magnitude;
    return std::log(m) + (m * k + m - 1) * lt + lg - m * lkf;
  };
  // The integrand in t is gamma-like around t = k with width ~ sqrt(k/m).
  const double spread = 12 * std::sqrt(k + 1.0);
  const double far = k + 3 * spread + 50;
  const double upper = std::min(T, far);
  std::vector<double> breaks{0};
  for (double b : {k - spread, double(k), k + spread, k + 2 * spread})
    if (b > 0 && b < upper) breaks.push_back(b);
  breaks.push_back(upper);
  double v = std::exp(integrate_log_positive(log_f, breaks, 1e-11));
  v = std::clamp(v, 0.0, 1.0);
  std::lock_guard lock(cache_mu_);
  eta_cache_.emplace(std::make_pair(k, R), v);
  return v;
}

std::size_t MeanSpectralMeasure::eta_cache_size() const {
  std::lock_guard lock(cache_mu_);
  return eta_cache_.size();
}

std::shared_ptr<const MeanSpectralMeasure> mean_measure(int n, int m) {
  check_nm(n, m);
  static std::mutex mu;
  static std::map<std::pair<int, int>, std::shared_ptr<const MeanSpectralMeasure>> registry;
  {
    std::lock_guard lock(mu);
    auto it = registry.find({n, m});
    if (it != registry.end()) return it->second;
  }
  auto built = std::make_shared<const MeanSpectralMeasure>(n, m);
  std::lock_guard lock(mu);
  return registry.emplace(std::make_pair(n, m), built).first->second;
}

double eta_k(int k, int n, int m, double R) { return mean_measure(n, m)->eta(k, R); }

double mean_density(double abs_z, int n, int m) { return mean_measure(n, m)->density(abs_z); }

double mean_ball_measure(double R, int n, int m) { return mean_measure(n, m)->ball_measure(R); }

namespace {

// log G(t^m).  Nodes of the graded panels below t = 1/2 are the same for
// every n and R and sit where G is most expensive, so they are memoized.
double log_g_power(int m, double t) {
  if (t >= 0.5) return meijer_g_log(std::pow(t, m), {double(m)}).log_magnitude;
  static std::mutex mu;
  static std::map<std::pair<int, double>, double> memo;
  {
    std::lock_guard lock(mu);
    auto it = memo.find({m, t});
    if (it != memo.end()) return it->second;
  }
  const double v = meijer_g_log(std::pow(t, m), {double(m)}).log_magnitude;
  std::lock_guard lock(mu);
  memo.emplace(std::make_pair(m, t), v);
  return v;
}

// eta_k for all k < n from composite GL16 panels of the given width on
// [0, T]; one Meijer G evaluation per node serves every k.
std::vector<double> eta_all_on(int n, int m, double T, double width) {
  const GaussRule& g = gauss_legendre(16);
  std::vector<double> edges{0};
  if (m >= 2)
    for (int j = 12; j >= 1; --j) edges.push_back(std::min(T, 0.5 * std::pow(4.0, -j)));
  double t = edges.back() > 0 ? 0.5 : width;
  while (t < T) {
    edges.push_back(t);
    t += width;
  }
  edges.push_back(T);
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());

  std::vector<double> lt, lw;  // log t and log(weight * m * t^{m-1} G(t^m)) per node
  for (std::size_t j = 0; j + 1 < edges.size(); ++j) {
    const double a = edges[j], b = edges[j + 1], h = 0.5 * (b - a), c = 0.5 * (a + b);
    for (std::size_t i = 0; i < g.nodes.size(); ++i) {
      const double x = c + h * g.nodes[i];
      const double l = std::log(x);
      lt.push_back(l);
      lw.push_back(std::log(h * g.weights[i] * m) + (m - 1) * l + log_g_power(m, x));
    }
  }
  std::vector<double> out(n);
  for (int k = 0; k < n; ++k) {
    const double c = m * k, lk = m * std::lgamma(k + 1.0);
    double top = kNegInf;
    for (std::size_t i = 0; i < lt.size(); ++i) top = std::max(top, lw[i] + c * lt[i]);
    double s = 0;
    for (std::size_t i = 0; i < lt.size(); ++i) s += std::exp(lw[i] + c * lt[i] - top);
    out[k] = std::clamp(std::exp(top + std::log(s) - lk), 0.0, 1.0);
  }
  return out;
}

}  // namespace

std::vector<double> eta_all(int n, int m, double R) {
  check_nm(n, m);
  if (!(R >= 0)) throw DomainError("eta_all: R must be nonnegative");
  if (R == 0) return std::vector<double>(n, 0.0);
  // beyond t_far every eta_k, k < n, has lost less than e^{-100} of its mass
  const double t_far = (n - 1) + 20 * std::sqrt(double(n)) + 40;
  const double T = std::isinf(R) ? t_far : std::min(t_far, n * std::exp((2.0 / m) * std::log(R)));
  std::vector<double> coarse = eta_all_on(n, m, T, 2.0);
  for (double width = 1.0; width >= 0.125; width /= 2) {
    std::vector<double> fine = eta_all_on(n, m, T, width);
    double worst = 0;
    for (int k = 0; k < n; ++k) worst = std::max(worst, std::abs(fine[k] - coarse[k]) / std::max(fine[k], 1e-300));
    if (worst <= 1e-10) return fine;
    coarse = std::move(fine);
  }
  throw PrecisionError("eta_all: panel refinement did not settle");
}

double mean_ball_measure_series(double R, int n, int m) {
  const std::vector<double> eta = eta_all(n, m, R);
  double s = 0;
  for (double v : eta) s += v;
  return s / n;
}

}  // namespace prodlaw
