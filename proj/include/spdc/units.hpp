#pragma once

#include <compare>
#include <numbers>
#include <stdexcept>
#include <string>

namespace spdc {

inline constexpr double kSpeedOfLight = 299792458.0;  // m/s
inline constexpr double kPi = std::numbers::pi;

constexpr double deg_to_rad(double deg) { return deg * kPi / 180.0; }
constexpr double rad_to_deg(double rad) { return rad * 180.0 / kPi; }

// A length stored in meters. Construct through the named unit factories so
// call sites never carry bare numbers of ambiguous scale.
class Length {
 public:
  constexpr Length() = default;

  static constexpr Length m(double v) { return Length(v); }
  static constexpr Length mm(double v) { return Length(v * 1e-3); }
  static constexpr Length um(double v) { return Length(v * 1e-6); }
  static constexpr Length nm(double v) { return Length(v * 1e-9); }

  constexpr double meters() const { return meters_; }
  constexpr double millimeters() const { return meters_ * 1e3; }
  constexpr double micrometers() const { return meters_ * 1e6; }
  constexpr double nanometers() const { return meters_ * 1e9; }

  constexpr auto operator<=>(const Length&) const = default;
  constexpr Length operator*(double s) const { return Length(meters_ * s); }
  constexpr Length operator+(Length o) const { return Length(meters_ + o.meters_); }
  constexpr Length operator-(Length o) const { return Length(meters_ - o.meters_); }

 private:
  constexpr explicit Length(double meters) : meters_(meters) {}
  double meters_ = 0.0;
};

// Vacuum wavelength <-> angular frequency.
constexpr double angular_frequency(Length vacuum_wavelength) {
  return 2.0 * kPi * kSpeedOfLight / vacuum_wavelength.meters();
}
constexpr Length vacuum_wavelength(double angular_frequency) {
  return Length::m(2.0 * kPi * kSpeedOfLight / angular_frequency);
}

// Thrown when an argument lies outside the mathematical domain of an operation.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Thrown for malformed user input: configs, count files, command-line values.
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace spdc
