#pragma once

#include <optional>

#include "spdc/dispersion.hpp"
#include "spdc/units.hpp"

namespace spdc {

// How the idler emission angle is chosen for a given signal frequency.
enum class IdlerGeometry {
  transverse_matched,  // solved from exact transverse momentum conservation
  fixed_reference,     // pinned to the reference internal angle
};

// Where the group indices used by the delay model come from.
enum class GroupIndexSource { reference_table, sellmeier };

enum class RetarderOrientation { compensating, enhancing };  // 0 and 90 degrees

struct Compensation {
  Length length = Length::mm(3);
  RetarderOrientation orientation = RetarderOrientation::compensating;
};

struct GroupVelocities {
  double pump_o;    // m/s
  double pump_e;
  double signal_o;
  double signal_e;
};

struct SourceConfig {
  MaterialModel material = MaterialModel::bbo();
  Length crystal_length = Length::mm(0.5);
  double coherence_time_s = 544e-15;
  Length pump_wavelength = Length::nm(405);
  // Internal ray angles of the down-converted photons.
  double phi1_deg = 1.807;
  double phi2_deg = 1.84;
  double phi3_deg = 1.806;
  double external_cone_deg = 3.0;
  double internal_angle_deg = 1.8;
  Length beam_waist = Length::mm(2);
  // Coincidence spectral width (power FWHM, vacuum wavelength).
  Length coincidence_width = Length::nm(27);
  IdlerGeometry idler_geometry = IdlerGeometry::transverse_matched;
  GroupIndexSource group_index_source = GroupIndexSource::reference_table;
  std::optional<Compensation> compensation;

  Length degenerate_wavelength() const { return pump_wavelength * 2.0; }
  double pump_omega() const { return angular_frequency(pump_wavelength); }
  double carrier_omega() const { return 0.5 * pump_omega(); }

  GroupVelocities group_velocities() const;
  // Throws InputError when an invariant is violated.
  void validate() const;
};

}  // namespace spdc
