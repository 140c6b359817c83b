#pragma once

// Run configuration: an INI-style document with [section] headers and
// key = value lines. Lists are comma separated. Every key is optional; the
// defaults reproduce the reference apparatus (BBO, 405 nm pump, 544 fs).

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "spdc/source_config.hpp"
#include "spdc/tomography.hpp"

namespace spdc {

struct SimulationSettings {
  double events_per_setting = 1e4;
  double background_rate = 0.0;
  int scan_points = 36;
  double scan_idler_deg = 45.0;
  std::vector<double> p_values = {1.0, 0.7, 0.5};
  double bell_p = 0.77;
  std::vector<double> bell_thetas_deg = {16.0, 24.0, 40.0};
  double bell_sigma_target = 0.025;
  double theta_step_deg = 0.5;
};

struct TomographySettings {
  MleOptions mle;
  double mean_count = 1e4;
};

struct InterferenceSettings {
  double tau_half_span_s = 300e-15;
  std::size_t tau_points = 8192;
};

struct RunConfig {
  SourceConfig source;
  std::vector<Length> crystal_lengths = {Length::mm(0.5), Length::mm(1), Length::mm(3)};
  // When set, tomography and scans use this p instead of the source model.
  std::optional<double> state_p;
  SimulationSettings simulation;
  TomographySettings tomography;
  InterferenceSettings interference;
  int position_grid = 128;
  std::string text;  // raw document, empty for defaults
  std::string hash;  // sha256 of `text`
};

// Throws InputError on syntax errors, unknown keys or out-of-range values.
RunConfig parse_run_config(const std::string& text);
RunConfig load_run_config(const std::string& path);

// Material section only (sellmeier.o/e, reference_table.*, crystal.cut_angle_deg).
MaterialModel parse_material(const std::string& text);

std::string sha256_hex(std::string_view data);

}  // namespace spdc
