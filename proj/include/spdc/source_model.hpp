#pragma once

// Two-crystal source geometry: how long the HH and VV pair amplitudes spend
// inside the crystals, and how much pump phase coherence survives that delay.

#include "spdc/source_config.hpp"

namespace spdc {

struct PropagationDelays {
  double tau_h;  // s
  double tau_v;  // s
  double difference() const;  // |tau_h - tau_v|
};

struct DelayReport {
  double tau_h;
  double tau_v;
  double delta_tau;
  double delta_tau_effective;  // after the optional pump retarder
  double p_mid;
  double p_z;
};

// Delays assuming both pairs are born in the middle of their crystal.
PropagationDelays propagation_delays(const SourceConfig& cfg);

// Delays for generation at depth z1 in the first crystal and z2 in the second.
PropagationDelays propagation_delays_at(const SourceConfig& cfg, double z1, double z2);

// Pump group-delay retardation of the compensation crystal, |1/V_p^o - 1/V_p^e| L_pre.
double retarder_delay(const SourceConfig& cfg);

// Delay difference seen by the pump phase after the retarder (if any).
double compensated_delay(const SourceConfig& cfg);
double compensated_delay(const SourceConfig& cfg, double delta_tau);

// p = exp(-delta_tau_eff / tau_c).
double decoherence_parameter(const SourceConfig& cfg);

inline constexpr int kDefaultPositionGrid = 128;

// p averaged over uniformly distributed generation depths (midpoint rule on an
// n_grid x n_grid lattice).
double position_averaged_p(const SourceConfig& cfg, int n_grid = kDefaultPositionGrid);

DelayReport delay_report(const SourceConfig& cfg, int n_grid = kDefaultPositionGrid);

}  // namespace spdc
