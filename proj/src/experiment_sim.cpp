#include "spdc/experiment_sim.hpp"

#include <cmath>
#include <cstdio>
#include <map>
#include <random>

#include <Eigen/Dense>

namespace spdc {

void AcquisitionPlan::validate() const {
  if (!(events_per_setting > 0.0)) throw InputError("events per setting must be > 0");
  if (!(background_rate >= 0.0)) throw InputError("background rate must be >= 0");
  const bool empty = mode == AcquisitionMode::tomography ? labels.empty() : angles.empty();
  if (empty) throw InputError("acquisition plan has no settings");
}

std::string angle_label(const AnglePair& a) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.3f/%.3f", a.first, a.second);
  return buf;
}

std::vector<double> expected_counts(const DensityMatrix4& rho, const AcquisitionPlan& plan) {
  plan.validate();
  std::vector<double> means;
  if (plan.mode == AcquisitionMode::tomography) {
    for (const auto& l : plan.labels) {
      means.push_back(plan.events_per_setting * Projector::from_label(l).expectation(rho.matrix()));
    }
  } else {
    for (const auto& a : plan.angles) {
      means.push_back(plan.events_per_setting * coincidence_probability(rho, a.first, a.second));
    }
  }
  for (double& m : means) m = std::max(m, 0.0) + plan.background_rate;
  return means;
}

CountRecords simulate_counts(const DensityMatrix4& rho, const AcquisitionPlan& plan) {
  const std::vector<double> means = expected_counts(rho, plan);
  std::mt19937_64 rng(plan.seed);
  CountRecords out;
  out.reserve(means.size());
  for (std::size_t i = 0; i < means.size(); ++i) {
    CountRecord r;
    r.label = plan.mode == AcquisitionMode::tomography ? plan.labels[i] : angle_label(plan.angles[i]);
    if (means[i] > 0.0) {
      // libstdc++ uses inversion for small means and rejection for large ones.
      std::poisson_distribution<std::uint64_t> poisson(means[i]);
      r.count = poisson(rng);
    }
    out.push_back(std::move(r));
  }
  return out;
}

double events_for_mean_count(const DensityMatrix4& rho, const std::vector<Projector>& set,
                             double mean_count) {
  double total = 0.0;
  for (const auto& p : set) total += p.expectation(rho.matrix());
  return mean_count * static_cast<double>(set.size()) / total;
}

AcquisitionPlan tomography_plan(double events_per_setting, std::uint64_t seed) {
  AcquisitionPlan plan;
  plan.mode = AcquisitionMode::tomography;
  for (const auto& p : standard_set()) plan.labels.push_back(p.label());
  plan.events_per_setting = events_per_setting;
  plan.seed = seed;
  return plan;
}

AcquisitionPlan visibility_scan_plan(int points, double idler_deg, double events_per_setting,
                                     std::uint64_t seed) {
  if (points < 3) throw InputError("visibility scan needs at least 3 points");
  AcquisitionPlan plan;
  plan.mode = AcquisitionMode::visibility_scan;
  for (int i = 0; i < points; ++i) plan.angles.emplace_back(180.0 * i / points, idler_deg);
  plan.events_per_setting = events_per_setting;
  plan.seed = seed;
  return plan;
}

VisibilityFit fit_visibility(const std::vector<double>& xi_s_deg, const std::vector<double>& counts) {
  if (xi_s_deg.size() != counts.size() || xi_s_deg.size() < 3) {
    throw InputError("visibility fit needs at least 3 (angle, count) points");
  }
  const auto n = static_cast<Eigen::Index>(counts.size());
  Eigen::MatrixXd x(n, 3);
  Eigen::VectorXd y(n);
  Eigen::VectorXd w(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double a = 2.0 * deg_to_rad(xi_s_deg[i]);
    x(i, 0) = 1.0;
    x(i, 1) = std::cos(a);
    x(i, 2) = std::sin(a);
    y(i) = counts[i];
    w(i) = 1.0 / std::max(counts[i], 1.0);
  }
  const Eigen::MatrixXd xtw = x.transpose() * w.asDiagonal();
  const Eigen::Matrix3d normal = xtw * x;
  const Eigen::Vector3d beta = normal.ldlt().solve(xtw * y);
  const Eigen::Matrix3d cov = normal.inverse();

  const double a = beta(0);
  const double r = std::hypot(beta(1), beta(2));
  VisibilityFit fit{};
  fit.offset = a;
  fit.visibility = r / a;
  fit.phase_deg = 0.5 * rad_to_deg(std::atan2(beta(2), beta(1)));
  Eigen::Vector3d grad(-fit.visibility / a, r > 0 ? beta(1) / (a * r) : 0.0,
                       r > 0 ? beta(2) / (a * r) : 0.0);
  fit.sigma = std::sqrt(grad.dot(cov * grad));
  return fit;
}

std::pair<double, double> correlation_from_counts(const std::array<double, 4>& n) {
  const double sum = n[0] + n[1] + n[2] + n[3];
  if (!(sum > 0.0)) throw DomainError("correlation undefined for zero total counts");
  const double e = (n[0] + n[1] - n[2] - n[3]) / sum;
  const double sign[4] = {1.0, 1.0, -1.0, -1.0};
  double var = 0.0;
  for (int k = 0; k < 4; ++k) var += (sign[k] - e) * (sign[k] - e) * n[k];
  return {e, std::sqrt(var) / sum};
}

BellMeasurement bell_from_counts(const CountRecords& records) {
  if (records.size() != 16) throw InputError("CHSH acquisition needs 16 settings");
  BellMeasurement m{};
  double var = 0.0;
  const double sign[4] = {1.0, -1.0, 1.0, 1.0};
  m.s = 0.0;
  for (int j = 0; j < 4; ++j) {
    std::array<double, 4> n{};
    for (int k = 0; k < 4; ++k) n[k] = static_cast<double>(records[4 * j + k].count);
    const auto [e, se] = correlation_from_counts(n);
    m.correlations[j] = e;
    m.s += sign[j] * e;
    var += se * se;
  }
  m.sigma_s = std::sqrt(var);
  m.records = records;
  return m;
}

namespace {

AcquisitionPlan bell_plan(double theta_deg, double events_per_setting, std::uint64_t seed) {
  AcquisitionPlan plan;
  plan.mode = AcquisitionMode::bell;
  plan.angles = ChshSettings::theta_scheme(theta_deg).acquisition_angles();
  plan.events_per_setting = events_per_setting;
  plan.seed = seed;
  return plan;
}

}  // namespace

BellMeasurement bell_acquisition(const DensityMatrix4& rho, double theta_deg,
                                 double events_per_setting, std::uint64_t seed) {
  return bell_from_counts(simulate_counts(rho, bell_plan(theta_deg, events_per_setting, seed)));
}

double expected_sigma_s(const DensityMatrix4& rho, double theta_deg, double events_per_setting) {
  const auto means = expected_counts(rho, bell_plan(theta_deg, events_per_setting, 0));
  double var = 0.0;
  for (int j = 0; j < 4; ++j) {
    const auto [e, se] = correlation_from_counts({means[4 * j], means[4 * j + 1],
                                                  means[4 * j + 2], means[4 * j + 3]});
    var += se * se;
  }
  return std::sqrt(var);
}

double events_for_sigma_s(const DensityMatrix4& rho, double theta_deg, double target_sigma) {
  if (!(target_sigma > 0.0)) throw DomainError("target sigma must be positive");
  const double at_one = expected_sigma_s(rho, theta_deg, 1.0);
  return (at_one / target_sigma) * (at_one / target_sigma);
}

}  // namespace spdc
