#pragma once

// Synthetic coincidence data: Poisson counts for tomography settings,
// polarizer scans and the 16-setting CHSH acquisition.

#include <cstdint>
#include <utility>
#include <variant>
#include <vector>

#include "spdc/bell_chsh.hpp"
#include "spdc/projectors.hpp"
#include "spdc/tomography.hpp"

namespace spdc {

enum class AcquisitionMode { tomography, visibility_scan, bell };

// (signal, idler) linear polarizer angles in degrees.
using AnglePair = std::pair<double, double>;

struct AcquisitionPlan {
  AcquisitionMode mode = AcquisitionMode::tomography;
  // Projector labels for tomography, angle pairs otherwise.
  std::vector<std::string> labels;
  std::vector<AnglePair> angles;
  // Expected events for a unit-probability setting; count ~ Poisson(N0 Tr[rho P]).
  double events_per_setting = 1e4;
  double background_rate = 0.0;  // accidental counts added to every setting mean
  std::uint64_t seed = 1;

  void validate() const;
};

// Label used for an angle-pair record, e.g. "45.000/135.000".
std::string angle_label(const AnglePair& a);

CountRecords simulate_counts(const DensityMatrix4& rho, const AcquisitionPlan& plan);

// Mean expected count per record for `plan` (before sampling).
std::vector<double> expected_counts(const DensityMatrix4& rho, const AcquisitionPlan& plan);

// N0 giving an average observed count of `mean_count` over the tomography set.
double events_for_mean_count(const DensityMatrix4& rho, const std::vector<Projector>& set,
                             double mean_count);

AcquisitionPlan tomography_plan(double events_per_setting, std::uint64_t seed);
// Signal polarizer over [0, 180) deg in `points` steps, idler fixed.
AcquisitionPlan visibility_scan_plan(int points, double idler_deg, double events_per_setting,
                                     std::uint64_t seed);

struct VisibilityFit {
  double visibility;
  double sigma;
  double offset;   // mean count level
  double phase_deg;  // signal angle of the maximum
};

// Least-squares fit of n(xi) = a + b cos 2xi + c sin 2xi with Poisson weights.
VisibilityFit fit_visibility(const std::vector<double>& xi_s_deg, const std::vector<double>& counts);

struct BellMeasurement {
  double s;
  double sigma_s;
  std::array<double, 4> correlations;  // E(a,b), E(a,b'), E(a',b), E(a',b')
  CountRecords records;
};

// E from four counts (N(a,b) + N(a+,b+) - N(a,b+) - N(a+,b)) / sum, with its
// Poisson standard error.
std::pair<double, double> correlation_from_counts(const std::array<double, 4>& n);

BellMeasurement bell_from_counts(const CountRecords& records);

BellMeasurement bell_acquisition(const DensityMatrix4& rho, double theta_deg,
                                 double events_per_setting, std::uint64_t seed);

// Expected sigma_S for the theta scheme at a given N0 (noise-free counts).
double expected_sigma_s(const DensityMatrix4& rho, double theta_deg, double events_per_setting);

// N0 at which the expected sigma_S equals `target_sigma`.
double events_for_sigma_s(const DensityMatrix4& rho, double theta_deg, double target_sigma);

}  // namespace spdc
