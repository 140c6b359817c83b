#include "spdc/interference.hpp"

#include <algorithm>
#include <cmath>

namespace spdc {

FringePattern fringe_pattern(const Spectrum& spectrum, const std::vector<double>& tau_grid) {
  spectrum.validate();
  FringePattern out;
  out.tau = tau_grid;
  out.carrier_omega = spectrum.carrier_omega;

  const auto& x = spectrum.offsets;
  const auto& w = spectrum.weights;
  const std::size_t n = x.size();
  // Trapezoid weights on the (uniform or not) offset grid.
  std::vector<double> q(n, 0.0);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    const double h = 0.5 * (x[i + 1] - x[i]);
    q[i] += h * w[i];
    q[i + 1] += h * w[i + 1];
  }
  double total = 0.0;
  for (double v : q) total += v;
  out.reference = total;

  out.probability.resize(tau_grid.size());
  for (std::size_t t = 0; t < tau_grid.size(); ++t) {
    const double tau = tau_grid[t];
    double c = 0.0;
    for (std::size_t i = 0; i < n; ++i) c += q[i] * std::cos((spectrum.carrier_omega + x[i]) * tau);
    // |1 + e^{i phi}|^2 / 4 = (1 + cos phi) / 2
    out.probability[t] = 0.5 * (total + c);
  }
  return out;
}

std::vector<double> tau_grid(double half_span, std::size_t points) {
  std::vector<double> g(points);
  const double step = 2.0 * half_span / static_cast<double>(points - 1);
  for (std::size_t i = 0; i < points; ++i) g[i] = -half_span + step * static_cast<double>(i);
  return g;
}

namespace {

struct Extremum {
  double tau;
  double value;
};

// Vertex of the parabola through three equally spaced samples.
Extremum refine(double t0, double step, double ym, double y0, double yp) {
  const double curv = ym - 2.0 * y0 + yp;
  if (curv == 0.0) return {t0, y0};
  const double d = 0.5 * (ym - yp) / curv;
  return {t0 + d * step, y0 - 0.25 * (ym - yp) * d};
}

// Piecewise-linear interpolation through the extrema, held constant past the ends.
double through(const std::vector<Extremum>& e, double tau) {
  if (tau <= e.front().tau) return e.front().value;
  if (tau >= e.back().tau) return e.back().value;
  const auto it = std::upper_bound(e.begin(), e.end(), tau,
                                   [](double t, const Extremum& x) { return t < x.tau; });
  const Extremum& b = *it;
  const Extremum& a = *(it - 1);
  return a.value + (tau - a.tau) * (b.value - a.value) / (b.tau - a.tau);
}

}  // namespace

std::vector<double> fringe_visibility(const FringePattern& pattern) {
  const auto& tau = pattern.tau;
  const auto& p = pattern.probability;
  if (tau.size() < 2) throw DomainError("undersampled");
  const double period = 2.0 * kPi / pattern.carrier_omega;
  const double step = tau[1] - tau[0];
  if (!(step > 0.0) || period / step < 8.0) throw DomainError("undersampled");

  // Fringe maxima and minima, one of each per carrier period. Tying the
  // envelopes to where the extremes actually sit avoids the outward bias of
  // a window evaluated at its center when the envelope falls within a period.
  std::vector<Extremum> upper, lower;
  for (std::size_t i = 1; i + 1 < p.size(); ++i) {
    if (p[i] >= p[i - 1] && p[i] > p[i + 1]) upper.push_back(refine(tau[i], step, p[i - 1], p[i], p[i + 1]));
    if (p[i] <= p[i - 1] && p[i] < p[i + 1]) lower.push_back(refine(tau[i], step, p[i - 1], p[i], p[i + 1]));
  }
  std::vector<double> vis(tau.size(), 0.0);
  if (upper.empty() || lower.empty()) return vis;  // no fringes
  for (std::size_t i = 0; i < tau.size(); ++i) {
    const double mx = through(upper, tau[i]);
    const double mn = through(lower, tau[i]);
    const double den = mx + mn;
    vis[i] = den > 0.0 ? std::max(0.0, (mx - mn) / den) : 0.0;
  }
  return vis;
}

double envelope_width(const FringePattern& pattern) {
  const std::vector<double> vis = fringe_visibility(pattern);
  const auto& tau = pattern.tau;
  const auto peak_it = std::max_element(vis.begin(), vis.end());
  const auto peak = static_cast<std::size_t>(peak_it - vis.begin());
  const double half = 0.5 * *peak_it;

  auto crossing = [&](std::size_t inside, std::size_t outside) {
    const double f = (half - vis[inside]) / (vis[outside] - vis[inside]);
    return tau[inside] + f * (tau[outside] - tau[inside]);
  };
  std::size_t r = peak;
  while (r + 1 < vis.size() && vis[r + 1] >= half) ++r;
  std::size_t l = peak;
  while (l > 0 && vis[l - 1] >= half) --l;
  if (r + 1 >= vis.size() || l == 0) {
    throw DomainError("fringe envelope does not decay to half maximum inside the delay grid");
  }
  return crossing(r, r + 1) - crossing(l, l - 1);
}

}  // namespace spdc
