#pragma once

// Birefringent dispersion of the down-conversion crystal, the longitudinal
// phase mismatch and the spectra it produces.

#include <span>
#include <vector>

#include "spdc/units.hpp"

namespace spdc {

struct SourceConfig;

enum class Polarization { ordinary, extraordinary };

// n^2 = a + b / (lambda^2 - c) - d * lambda^2, lambda in micrometers.
struct SellmeierCoefficients {
  double a = 0.0;
  double b = 0.0;
  double c = 0.0;
  double d = 0.0;

  double index(double lambda_um) const;
  // dn/dlambda in 1/um.
  double index_slope(double lambda_um) const;
};

// Tabulated indices at the pump (405 nm) and down-conversion (810 nm)
// reference wavelengths. The extraordinary entries are the effective
// indices at the crystal cut angle.
struct ReferenceTable {
  double n_pump_o = 1.691719;
  double n_pump_e = 1.659273;
  double n_signal_o = 1.659984;
  double n_signal_e = 1.632171;
  double ng_pump_o = 1.77878;
  double ng_pump_e = 1.73901;
  double ng_signal_o = 1.68376;
  double ng_signal_e = 1.65483;
};

class MaterialModel {
 public:
  // BBO with the Eimerl et al. Sellmeier set, cut for Type-I degenerate
  // phase matching at an internal emission angle of 1.8 degrees.
  static MaterialModel bbo();

  MaterialModel(SellmeierCoefficients ordinary, SellmeierCoefficients extraordinary,
                double cut_angle_rad, ReferenceTable table,
                Length pump_reference = Length::nm(405),
                Length downconversion_reference = Length::nm(810),
                Length valid_min = Length::um(0.35), Length valid_max = Length::um(1.2));

  // Phase index. The extraordinary branch is evaluated at the cut angle.
  double index(Length lambda, Polarization branch) const;
  // n - lambda dn/dlambda at fixed propagation angle.
  double group_index(Length lambda, Polarization branch) const;

  // Cut angle for which the extraordinary pump index equals the ordinary
  // down-conversion index projected on the pump axis at the given internal
  // emission angle, i.e. the longitudinal mismatch vanishes at degeneracy.
  static double phase_matching_cut(const SellmeierCoefficients& ordinary,
                                   const SellmeierCoefficients& extraordinary,
                                   Length pump, double internal_angle_rad);

  const SellmeierCoefficients& ordinary() const { return ordinary_; }
  const SellmeierCoefficients& extraordinary() const { return extraordinary_; }
  double cut_angle_rad() const { return cut_angle_; }
  const ReferenceTable& reference_table() const { return table_; }
  Length pump_reference() const { return pump_ref_; }
  Length downconversion_reference() const { return dc_ref_; }
  Length valid_min() const { return valid_min_; }
  Length valid_max() const { return valid_max_; }

  MaterialModel with_cut_angle(double cut_angle_rad) const;
  MaterialModel with_reference_table(const ReferenceTable& table) const;

 private:
  void check_range(Length lambda) const;

  SellmeierCoefficients ordinary_;
  SellmeierCoefficients extraordinary_;
  double cut_angle_;
  ReferenceTable table_;
  Length pump_ref_;
  Length dc_ref_;
  Length valid_min_;
  Length valid_max_;
};

// k = 2 pi n / lambda in rad/m. Throws DomainError outside the model range.
double wavenumber(const MaterialModel& material, Length lambda, Polarization branch);

// Longitudinal mismatch k_p - k_s cos(theta_s) - k_i cos(theta_i) in rad/m for
// an absolute signal angular frequency, with the pump at its carrier and the
// signal at the fixed reference internal angle. Throws DomainError when no
// idler angle satisfies the transverse condition.
double longitudinal_mismatch(const SourceConfig& cfg, double signal_omega);

// sin(x)/x with x = dk L / 2.
double mismatch_function(const SourceConfig& cfg, double signal_omega);
double sinc(double x);

// Gaussian transverse mismatch factor exp(-w^2 dk^2 / 4).
double transverse_profile(Length beam_waist, double transverse_mismatch);

// 1/e half-width (radians) of the transverse factor mapped onto the internal
// idler emission angle at degeneracy.
double transverse_angular_width(const SourceConfig& cfg);

// Tabulated nonnegative spectral weight against the angular-frequency offset
// from the down-conversion carrier.
struct Spectrum {
  double carrier_omega = 0.0;
  std::vector<double> offsets;  // rad/s, uniform and strictly increasing
  std::vector<double> weights;  // nonnegative, peak 1

  double step() const { return offsets.size() > 1 ? offsets[1] - offsets[0] : 0.0; }
  // Full width at half maximum in angular frequency (outermost crossings).
  double fwhm_omega() const;
  // Same crossings expressed as a vacuum wavelength interval.
  Length fwhm_wavelength() const;
  void validate() const;
};

enum class SpectrumMode { single, coincidence };

inline constexpr std::size_t kSpectrumPoints = 2048;

// |f|^2 (single counts) or |f R|^2 (coincidences), peak-normalized.
Spectrum effective_spectrum(const SourceConfig& cfg, SpectrumMode mode);

// Unit-peak Gaussian coincidence correction with power FWHM set by the
// configured coincidence width, evaluated at a frequency offset.
double coincidence_correction(const SourceConfig& cfg, double offset);

// Half-span of the frequency grid used for the spectra.
double spectrum_half_span(const SourceConfig& cfg);

}  // namespace spdc
