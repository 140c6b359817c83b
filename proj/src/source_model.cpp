#include "spdc/source_model.hpp"

#include <cmath>

namespace spdc {

GroupVelocities SourceConfig::group_velocities() const {
  if (group_index_source == GroupIndexSource::reference_table) {
    const auto& t = material.reference_table();
    return {kSpeedOfLight / t.ng_pump_o, kSpeedOfLight / t.ng_pump_e,
            kSpeedOfLight / t.ng_signal_o, kSpeedOfLight / t.ng_signal_e};
  }
  const Length lp = pump_wavelength;
  const Length ls = degenerate_wavelength();
  return {kSpeedOfLight / material.group_index(lp, Polarization::ordinary),
          kSpeedOfLight / material.group_index(lp, Polarization::extraordinary),
          kSpeedOfLight / material.group_index(ls, Polarization::ordinary),
          kSpeedOfLight / material.group_index(ls, Polarization::extraordinary)};
}

void SourceConfig::validate() const {
  if (!(crystal_length.meters() >= 0.0)) throw InputError("crystal length must be >= 0");
  if (!(coherence_time_s > 0.0)) throw InputError("pump coherence time must be > 0");
  if (!(pump_wavelength.meters() > 0.0)) throw InputError("pump wavelength must be > 0");
  if (!(beam_waist.meters() > 0.0)) throw InputError("beam waist must be > 0");
  if (!(coincidence_width.meters() > 0.0)) throw InputError("coincidence width must be > 0");
  const auto v = group_velocities();
  for (double vel : {v.pump_o, v.pump_e, v.signal_o, v.signal_e}) {
    if (!(vel < kSpeedOfLight && vel > kSpeedOfLight / 3.0)) {
      throw InputError("group velocities must lie in (c/3, c)");
    }
  }
  if (compensation && !(compensation->length.meters() >= 0.0)) {
    throw InputError("compensation length must be >= 0");
  }
}

double PropagationDelays::difference() const { return std::abs(tau_h - tau_v); }

PropagationDelays propagation_delays(const SourceConfig& cfg) {
  const double half = 0.5 * cfg.crystal_length.meters();
  return propagation_delays_at(cfg, half, half);
}

PropagationDelays propagation_delays_at(const SourceConfig& cfg, double z1, double z2) {
  const auto v = cfg.group_velocities();
  const double l = cfg.crystal_length.meters();
  const double c1 = std::cos(deg_to_rad(cfg.phi1_deg));
  const double c2 = std::cos(deg_to_rad(cfg.phi2_deg));
  const double c3 = std::cos(deg_to_rad(cfg.phi3_deg));
  // The HH pair is born in the second crystal after the pump crossed the
  // first; the VV pair is born in the first and then crosses the second as
  // extraordinary light.
  const double tau_h = (l - z1) / v.pump_o + z2 / v.pump_e + (l - z2) / (v.signal_o * c3);
  const double tau_v = (l - z1) / (v.signal_o * c1) + l / (v.signal_e * c2);
  return {tau_h, tau_v};
}

double retarder_delay(const SourceConfig& cfg) {
  if (!cfg.compensation) return 0.0;
  const auto v = cfg.group_velocities();
  return cfg.compensation->length.meters() * std::abs(1.0 / v.pump_o - 1.0 / v.pump_e);
}

double compensated_delay(const SourceConfig& cfg, double delta_tau) {
  if (!cfg.compensation) return delta_tau;
  const double pre = retarder_delay(cfg);
  if (cfg.compensation->orientation == RetarderOrientation::compensating) {
    return std::abs(delta_tau - pre);
  }
  return delta_tau + pre;
}

double compensated_delay(const SourceConfig& cfg) {
  return compensated_delay(cfg, propagation_delays(cfg).difference());
}

double decoherence_parameter(const SourceConfig& cfg) {
  return std::exp(-compensated_delay(cfg) / cfg.coherence_time_s);
}

double position_averaged_p(const SourceConfig& cfg, int n_grid) {
  if (n_grid < 32) throw DomainError("position grid needs at least 32 points per axis");
  const double l = cfg.crystal_length.meters();
  if (l <= 0.0) return 1.0;
  const double h = l / n_grid;
  double sum = 0.0;
  for (int i = 0; i < n_grid; ++i) {
    const double z1 = (i + 0.5) * h;
    for (int j = 0; j < n_grid; ++j) {
      const double z2 = (j + 0.5) * h;
      const double dt = compensated_delay(cfg, propagation_delays_at(cfg, z1, z2).difference());
      sum += std::exp(-dt / cfg.coherence_time_s);
    }
  }
  return sum / (static_cast<double>(n_grid) * n_grid);
}

DelayReport delay_report(const SourceConfig& cfg, int n_grid) {
  const auto d = propagation_delays(cfg);
  DelayReport r{};
  r.tau_h = d.tau_h;
  r.tau_v = d.tau_v;
  r.delta_tau = d.difference();
  r.delta_tau_effective = compensated_delay(cfg, r.delta_tau);
  r.p_mid = std::exp(-r.delta_tau_effective / cfg.coherence_time_s);
  r.p_z = position_averaged_p(cfg, n_grid);
  return r;
}

}  // namespace spdc
