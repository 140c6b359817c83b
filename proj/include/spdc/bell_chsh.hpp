#pragma once

#include <vector>

#include "spdc/polarization_state.hpp"

namespace spdc {

// Polarizer angles in degrees: a, a' on the signal side, b, b' on the idler side.
struct ChshSettings {
  double a;
  double a_prime;
  double b;
  double b_prime;

  // a = 0, b = theta, a' = b + theta, b' = a' + theta.
  static ChshSettings theta_scheme(double theta_deg);

  // The 16 (signal, idler) polarizer pairs needed to measure all four E terms,
  // four per correlation in the order (alpha, beta), (alpha+90, beta+90),
  // (alpha, beta+90), (alpha+90, beta).
  std::vector<std::pair<double, double>> acquisition_angles() const;
};

// E = P(a,b) + P(a+90,b+90) - P(a,b+90) - P(a+90,b).
double correlation_E(const DensityMatrix4& rho, double alpha_deg, double beta_deg);

// S = E(a,b) - E(a,b') + E(a',b) + E(a',b').
double chsh_S(const DensityMatrix4& rho, const ChshSettings& s);

struct ScanPoint {
  double theta_deg;
  double s;
};

// S(theta) in the theta scheme for model_state(p, 0).
std::vector<ScanPoint> chsh_scan(double p, const std::vector<double>& theta_grid_deg);

// Standard deviations by which S exceeds the local bound 2.
double violation_significance(double s, double sigma_s);

}  // namespace spdc
