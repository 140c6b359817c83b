#include "spdc/bell_chsh.hpp"

namespace spdc {

ChshSettings ChshSettings::theta_scheme(double theta_deg) {
  ChshSettings s{};
  s.a = 0.0;
  s.b = theta_deg;
  s.a_prime = s.b + theta_deg;
  s.b_prime = s.a_prime + theta_deg;
  return s;
}

std::vector<std::pair<double, double>> ChshSettings::acquisition_angles() const {
  std::vector<std::pair<double, double>> out;
  out.reserve(16);
  const std::pair<double, double> terms[] = {{a, b}, {a, b_prime}, {a_prime, b}, {a_prime, b_prime}};
  for (const auto& [alpha, beta] : terms) {
    out.emplace_back(alpha, beta);
    out.emplace_back(alpha + 90.0, beta + 90.0);
    out.emplace_back(alpha, beta + 90.0);
    out.emplace_back(alpha + 90.0, beta);
  }
  return out;
}

double correlation_E(const DensityMatrix4& rho, double alpha_deg, double beta_deg) {
  const double ap = alpha_deg + 90.0;
  const double bp = beta_deg + 90.0;
  return coincidence_probability(rho, alpha_deg, beta_deg) + coincidence_probability(rho, ap, bp) -
         coincidence_probability(rho, alpha_deg, bp) - coincidence_probability(rho, ap, beta_deg);
}

double chsh_S(const DensityMatrix4& rho, const ChshSettings& s) {
  return correlation_E(rho, s.a, s.b) - correlation_E(rho, s.a, s.b_prime) +
         correlation_E(rho, s.a_prime, s.b) + correlation_E(rho, s.a_prime, s.b_prime);
}

std::vector<ScanPoint> chsh_scan(double p, const std::vector<double>& theta_grid_deg) {
  const DensityMatrix4 rho = model_state(p);
  std::vector<ScanPoint> out;
  out.reserve(theta_grid_deg.size());
  for (double theta : theta_grid_deg) {
    out.push_back({theta, chsh_S(rho, ChshSettings::theta_scheme(theta))});
  }
  return out;
}

double violation_significance(double s, double sigma_s) {
  if (!(sigma_s > 0.0)) throw DomainError("sigma_S must be positive");
  return (s - 2.0) / sigma_s;
}

}  // namespace spdc
