#include "spdc/simplex.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace spdc {

namespace {

constexpr double kReflect = 1.0;
constexpr double kExpand = 2.0;
constexpr double kContract = 0.5;
constexpr double kShrink = 0.5;

double fluctuation(double temperature, std::mt19937_64* rng) {
  if (temperature <= 0.0 || rng == nullptr) return 0.0;
  std::exponential_distribution<double> exp1(1.0);
  return temperature * exp1(*rng);
}

std::vector<double> affine(const std::vector<double>& c, const std::vector<double>& x, double t) {
  // c + t (x - c)
  std::vector<double> out(c.size());
  for (std::size_t i = 0; i < c.size(); ++i) out[i] = c[i] + t * (x[i] - c[i]);
  return out;
}

}  // namespace

Simplex::Simplex(const Objective& f, std::vector<double> origin, double scale)
    : f_(f), best_f_(std::numeric_limits<double>::infinity()) {
  const std::size_t n = origin.size();
  points_.assign(n + 1, origin);
  for (std::size_t i = 0; i < n; ++i) points_[i + 1][i] += scale;
  values_.resize(n + 1);
  for (std::size_t i = 0; i <= n; ++i) values_[i] = evaluate(points_[i]);
}

double Simplex::evaluate(const std::vector<double>& x) {
  ++evaluations_;
  double v = f_(x);
  if (std::isnan(v)) v = std::numeric_limits<double>::infinity();
  if (v < best_f_ || best_x_.empty()) {
    best_f_ = v;
    best_x_ = x;
  }
  return v;
}

void Simplex::step(double temperature, std::mt19937_64* rng) {
  const std::size_t m = points_.size();
  const std::size_t n = m - 1;

  std::vector<double> seen(m);
  for (std::size_t i = 0; i < m; ++i) seen[i] = values_[i] + fluctuation(temperature, rng);
  std::vector<std::size_t> order(m);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return seen[a] < seen[b] || (seen[a] == seen[b] && a < b);
  });
  const std::size_t best = order.front();
  const std::size_t worst = order.back();
  const std::size_t second = order[m - 2];

  std::vector<double> centroid(n, 0.0);
  for (std::size_t i = 0; i < m; ++i) {
    if (i == worst) continue;
    for (std::size_t k = 0; k < n; ++k) centroid[k] += points_[i][k];
  }
  for (double& c : centroid) c /= static_cast<double>(n);

  auto trial = [&](const std::vector<double>& x, double& raw) {
    raw = evaluate(x);
    return raw - fluctuation(temperature, rng);
  };
  auto replace_worst = [&](std::vector<double> x, double raw) {
    points_[worst] = std::move(x);
    values_[worst] = raw;
  };

  double fr_raw = 0.0;
  std::vector<double> xr = affine(centroid, points_[worst], -kReflect);
  const double fr = trial(xr, fr_raw);

  if (fr < seen[best]) {
    double fe_raw = 0.0;
    std::vector<double> xe = affine(centroid, points_[worst], -kExpand);
    const double fe = trial(xe, fe_raw);
    if (fe < fr) {
      replace_worst(std::move(xe), fe_raw);
    } else {
      replace_worst(std::move(xr), fr_raw);
    }
    return;
  }
  if (fr < seen[second]) {
    replace_worst(std::move(xr), fr_raw);
    return;
  }

  const bool outside = fr < seen[worst];
  std::vector<double> xc = outside ? affine(centroid, xr, kContract)
                                   : affine(centroid, points_[worst], kContract);
  double fc_raw = 0.0;
  const double fc = trial(xc, fc_raw);
  if (fc < (outside ? fr : seen[worst])) {
    replace_worst(std::move(xc), fc_raw);
    return;
  }

  for (std::size_t i = 0; i < m; ++i) {
    if (i == best) continue;
    points_[i] = affine(points_[best], points_[i], kShrink);
    values_[i] = evaluate(points_[i]);
  }
}

double Simplex::spread() const {
  const auto [lo, hi] = std::minmax_element(values_.begin(), values_.end());
  return *hi - *lo;
}

bool Simplex::converged(double rel_tol, double abs_tol) const {
  const double lo = *std::min_element(values_.begin(), values_.end());
  const double s = spread();
  return std::isfinite(s) && s <= rel_tol * std::abs(lo) + abs_tol;
}

namespace {

SimplexResult descend(Simplex& simplex, const SimplexOptions& opts, long budget) {
  SimplexResult r;
  while (simplex.evaluations() < budget) {
    if (simplex.converged(opts.rel_tol, opts.abs_tol)) {
      r.converged = true;
      break;
    }
    simplex.step(0.0, nullptr);
  }
  r.x = simplex.best_point();
  r.value = simplex.best_value();
  r.evaluations = simplex.evaluations();
  return r;
}

}  // namespace

SimplexResult nelder_mead(const Objective& f, const std::vector<double>& x0,
                          const SimplexOptions& opts) {
  Simplex simplex(f, x0, opts.scale);
  return descend(simplex, opts, opts.max_evaluations);
}

SimplexResult anneal(const Objective& f, const std::vector<double>& x0,
                     const SimplexOptions& simplex_opts, const AnnealingOptions& opts,
                     std::mt19937_64& rng) {
  // Initial temperature: spread of the objective over random probes around x0.
  std::normal_distribution<double> gauss(0.0, simplex_opts.scale);
  std::vector<double> probe_values;
  long probe_evaluations = 0;
  for (int i = 0; i < opts.probes; ++i) {
    std::vector<double> x = x0;
    for (double& xi : x) xi += gauss(rng);
    const double v = f(x);
    ++probe_evaluations;
    if (std::isfinite(v)) probe_values.push_back(v);
  }
  double t0 = 0.0;
  if (probe_values.size() > 1) {
    const double mean =
        std::accumulate(probe_values.begin(), probe_values.end(), 0.0) / probe_values.size();
    double var = 0.0;
    for (double v : probe_values) var += (v - mean) * (v - mean);
    t0 = std::sqrt(var / static_cast<double>(probe_values.size() - 1));
  }

  Simplex simplex(f, x0, simplex_opts.scale);
  if (t0 > 0.0) {
    for (double t = t0; t >= opts.floor_ratio * t0; t *= opts.cooling) {
      for (int s = 0; s < opts.steps_per_temperature; ++s) simplex.step(t, &rng);
      if (simplex.evaluations() >= simplex_opts.max_evaluations) break;
    }
  }
  // Continue at zero temperature from the best point seen while annealing.
  Simplex polish(f, simplex.best_point(), simplex_opts.scale);
  const long budget = std::max(0L, simplex_opts.max_evaluations - simplex.evaluations());
  SimplexResult r = descend(polish, simplex_opts, budget);
  r.evaluations += simplex.evaluations() + probe_evaluations;
  if (simplex.best_value() < r.value) {
    r.x = simplex.best_point();
    r.value = simplex.best_value();
  }
  return r;
}

}  // namespace spdc
