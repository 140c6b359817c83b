#include "spdc/dispersion.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "spdc/source_config.hpp"

namespace spdc {

double SellmeierCoefficients::index(double lambda_um) const {
  const double l2 = lambda_um * lambda_um;
  return std::sqrt(a + b / (l2 - c) - d * l2);
}

double SellmeierCoefficients::index_slope(double lambda_um) const {
  const double l2 = lambda_um * lambda_um;
  const double dn2 = -2.0 * b * lambda_um / ((l2 - c) * (l2 - c)) - 2.0 * d * lambda_um;
  return dn2 / (2.0 * index(lambda_um));
}

namespace {

// Eimerl, Davis, Velsko, Graham, Zalkin (1987), lambda in um.
constexpr SellmeierCoefficients kBboOrdinary{2.7359, 0.01878, 0.01822, 0.01354};
constexpr SellmeierCoefficients kBboExtraordinary{2.3753, 0.01224, 0.01667, 0.01516};

// Index-ellipsoid interpolation at angle theta to the optic axis.
double ellipsoid_index(double n_o, double n_e, double theta) {
  const double c = std::cos(theta);
  const double s = std::sin(theta);
  return 1.0 / std::sqrt(c * c / (n_o * n_o) + s * s / (n_e * n_e));
}

}  // namespace

MaterialModel::MaterialModel(SellmeierCoefficients ordinary, SellmeierCoefficients extraordinary,
                             double cut_angle_rad, ReferenceTable table, Length pump_reference,
                             Length downconversion_reference, Length valid_min, Length valid_max)
    : ordinary_(ordinary),
      extraordinary_(extraordinary),
      cut_angle_(cut_angle_rad),
      table_(table),
      pump_ref_(pump_reference),
      dc_ref_(downconversion_reference),
      valid_min_(valid_min),
      valid_max_(valid_max) {
  if (!(valid_min.meters() > 0.0) || !(valid_max > valid_min)) {
    throw InputError("material validity range must satisfy 0 < min < max");
  }
}

MaterialModel MaterialModel::bbo() {
  const double cut =
      phase_matching_cut(kBboOrdinary, kBboExtraordinary, Length::nm(405), deg_to_rad(1.8));
  return MaterialModel(kBboOrdinary, kBboExtraordinary, cut, ReferenceTable{});
}

MaterialModel MaterialModel::with_cut_angle(double cut_angle_rad) const {
  MaterialModel m = *this;
  m.cut_angle_ = cut_angle_rad;
  return m;
}

MaterialModel MaterialModel::with_reference_table(const ReferenceTable& table) const {
  MaterialModel m = *this;
  m.table_ = table;
  return m;
}

double MaterialModel::phase_matching_cut(const SellmeierCoefficients& ordinary,
                                         const SellmeierCoefficients& extraordinary,
                                         Length pump, double internal_angle_rad) {
  const double lp = pump.micrometers();
  const double target = ordinary.index(2.0 * lp) * std::cos(internal_angle_rad);
  const double no = ordinary.index(lp);
  const double ne = extraordinary.index(lp);
  const double s2 = (1.0 / (target * target) - 1.0 / (no * no)) /
                    (1.0 / (ne * ne) - 1.0 / (no * no));
  if (!(s2 >= 0.0 && s2 <= 1.0)) {
    throw DomainError("no Type-I phase-matching cut exists for this pump wavelength");
  }
  return std::asin(std::sqrt(s2));
}

void MaterialModel::check_range(Length lambda) const {
  if (!(lambda >= valid_min_ && lambda <= valid_max_)) {
    std::ostringstream msg;
    msg << "wavelength " << lambda.nanometers() << " nm outside material range ["
        << valid_min_.nanometers() << ", " << valid_max_.nanometers() << "] nm";
    throw DomainError(msg.str());
  }
}

double MaterialModel::index(Length lambda, Polarization branch) const {
  check_range(lambda);
  const double l = lambda.micrometers();
  const double no = ordinary_.index(l);
  if (branch == Polarization::ordinary) return no;
  return ellipsoid_index(no, extraordinary_.index(l), cut_angle_);
}

double MaterialModel::group_index(Length lambda, Polarization branch) const {
  check_range(lambda);
  const double l = lambda.micrometers();
  const double no = ordinary_.index(l);
  const double dno = ordinary_.index_slope(l);
  if (branch == Polarization::ordinary) return no - l * dno;

  const double ne = extraordinary_.index(l);
  const double dne = extraordinary_.index_slope(l);
  const double c2 = std::pow(std::cos(cut_angle_), 2);
  const double s2 = std::pow(std::sin(cut_angle_), 2);
  const double n = ellipsoid_index(no, ne, cut_angle_);
  // d(1/n^2)/dlambda, then dn = -n^3/2 d(1/n^2).
  const double du = -2.0 * c2 * dno / (no * no * no) - 2.0 * s2 * dne / (ne * ne * ne);
  const double dn = -0.5 * n * n * n * du;
  return n - l * dn;
}

double wavenumber(const MaterialModel& material, Length lambda, Polarization branch) {
  return 2.0 * kPi * material.index(lambda, branch) / lambda.meters();
}

double longitudinal_mismatch(const SourceConfig& cfg, double signal_omega) {
  const double pump_omega = cfg.pump_omega();
  const double idler_omega = pump_omega - signal_omega;
  if (!(signal_omega > 0.0) || !(idler_omega > 0.0)) {
    throw DomainError("signal frequency outside the down-conversion band");
  }
  const auto& mat = cfg.material;
  const double kp = wavenumber(mat, cfg.pump_wavelength, Polarization::extraordinary);
  const double ks = wavenumber(mat, vacuum_wavelength(signal_omega), Polarization::ordinary);
  const double ki = wavenumber(mat, vacuum_wavelength(idler_omega), Polarization::ordinary);

  const double theta_s = deg_to_rad(cfg.internal_angle_deg);
  double cos_i = std::cos(theta_s);
  if (cfg.idler_geometry == IdlerGeometry::transverse_matched) {
    const double sin_i = ks * std::sin(theta_s) / ki;
    if (sin_i > 1.0) throw DomainError("no real idler angle conserves transverse momentum");
    cos_i = std::sqrt(1.0 - sin_i * sin_i);
  }
  return kp - ks * std::cos(theta_s) - ki * cos_i;
}

double sinc(double x) {
  if (std::abs(x) < 1e-8) return 1.0 - x * x / 6.0;
  return std::sin(x) / x;
}

double mismatch_function(const SourceConfig& cfg, double signal_omega) {
  const double dk = longitudinal_mismatch(cfg, signal_omega);
  return sinc(0.5 * dk * cfg.crystal_length.meters());
}

double transverse_profile(Length beam_waist, double transverse_mismatch) {
  const double w = beam_waist.meters();
  if (!(w > 0.0)) throw DomainError("beam waist must be positive");
  return std::exp(-w * w * transverse_mismatch * transverse_mismatch / 4.0);
}

double transverse_angular_width(const SourceConfig& cfg) {
  // F drops to 1/e at |dk_perp| = 2/w; near the reference angle
  // dk_perp ~ k_i cos(theta) dtheta_i.
  const double k = wavenumber(cfg.material, cfg.degenerate_wavelength(), Polarization::ordinary);
  const double theta = deg_to_rad(cfg.internal_angle_deg);
  return 2.0 / (cfg.beam_waist.meters() * k * std::cos(theta));
}

double coincidence_correction(const SourceConfig& cfg, double offset) {
  const double l0 = cfg.degenerate_wavelength().meters();
  const double width = 2.0 * kPi * kSpeedOfLight * cfg.coincidence_width.meters() / (l0 * l0);
  // |R|^2 = exp(-4 ln2 x^2 / width^2).
  return std::exp(-2.0 * std::log(2.0) * offset * offset / (width * width));
}

double spectrum_half_span(const SourceConfig& cfg) {
  const double carrier = cfg.carrier_omega();
  const double lowest = angular_frequency(cfg.material.valid_max());
  const double highest = angular_frequency(cfg.material.valid_min());
  const double cap = 0.98 * std::min(carrier - lowest, highest - carrier);

  const double length = cfg.crystal_length.meters();
  if (length <= 0.0) return cap;

  // First detuning on either side where |dk| L / 2 reaches pi.
  constexpr int kScan = 4096;
  const double step = cap / kScan;
  for (int i = 1; i <= kScan; ++i) {
    const double x = i * step;
    for (double sign : {1.0, -1.0}) {
      const double dk = longitudinal_mismatch(cfg, carrier + sign * x);
      if (std::abs(dk) * length / 2.0 >= kPi) return std::min(6.0 * x, cap);
    }
  }
  return cap;
}

Spectrum effective_spectrum(const SourceConfig& cfg, SpectrumMode mode) {
  Spectrum s;
  s.carrier_omega = cfg.carrier_omega();
  const double half = spectrum_half_span(cfg);
  const double step = 2.0 * half / static_cast<double>(kSpectrumPoints - 1);
  s.offsets.resize(kSpectrumPoints);
  s.weights.resize(kSpectrumPoints);
  for (std::size_t i = 0; i < kSpectrumPoints; ++i) {
    const double offset = -half + step * static_cast<double>(i);
    const double f = mismatch_function(cfg, s.carrier_omega + offset);
    double w = f * f;
    if (mode == SpectrumMode::coincidence) {
      const double r = coincidence_correction(cfg, offset);
      w *= r * r;
    }
    s.offsets[i] = offset;
    s.weights[i] = w;
  }
  const double peak = *std::max_element(s.weights.begin(), s.weights.end());
  for (double& w : s.weights) w /= peak;
  return s;
}

namespace {

struct Crossings {
  double low;
  double high;
};

Crossings half_max_crossings(const Spectrum& s) {
  const auto& x = s.offsets;
  const auto& y = s.weights;
  const double half = 0.5 * *std::max_element(y.begin(), y.end());
  std::size_t first = 0;
  while (first < y.size() && y[first] < half) ++first;
  std::size_t last = y.size() - 1;
  while (last > 0 && y[last] < half) --last;

  auto interp = [&](std::size_t a, std::size_t b) {
    if (y[a] == y[b]) return x[a];
    return x[a] + (half - y[a]) * (x[b] - x[a]) / (y[b] - y[a]);
  };
  const double low = first == 0 ? x.front() : interp(first - 1, first);
  const double high = last + 1 >= y.size() ? x.back() : interp(last, last + 1);
  return {low, high};
}

}  // namespace

double Spectrum::fwhm_omega() const {
  const auto c = half_max_crossings(*this);
  return c.high - c.low;
}

Length Spectrum::fwhm_wavelength() const {
  const auto c = half_max_crossings(*this);
  return vacuum_wavelength(carrier_omega + c.low) - vacuum_wavelength(carrier_omega + c.high);
}

void Spectrum::validate() const {
  if (offsets.size() != weights.size()) throw DomainError("spectrum grid/weight size mismatch");
  if (offsets.size() < 256) throw DomainError("spectrum needs at least 256 points");
  for (std::size_t i = 1; i < offsets.size(); ++i) {
    if (!(offsets[i] > offsets[i - 1])) throw DomainError("spectrum grid not strictly increasing");
  }
  for (double w : weights) {
    if (!(w >= 0.0)) throw DomainError("spectral weights must be nonnegative");
  }
}

}  // namespace spdc
