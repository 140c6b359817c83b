#pragma once

#include <array>
#include <complex>
#include <optional>
#include <string>

#include <Eigen/Core>

#include "spdc/units.hpp"

namespace spdc {

using Complex = std::complex<double>;
using Matrix4c = Eigen::Matrix<Complex, 4, 4>;
using Vector4c = Eigen::Matrix<Complex, 4, 1>;

// Ordered two-photon polarization basis.
inline constexpr std::array<const char*, 4> kBasisLabels = {"HH", "HV", "VH", "VV"};

// Single-photon polarization amplitude pair (alpha_H, alpha_V), unit norm.
class PolarizationKet {
 public:
  PolarizationKet(Complex h, Complex v);

  // Linear polarization at `deg` counter-clockwise from horizontal.
  static PolarizationKet linear(double deg);
  // One of H, V, D (45 deg), A (135 deg), R = (H - iV)/sqrt2, L = (H + iV)/sqrt2.
  static PolarizationKet from_symbol(char symbol);

  Complex h() const { return h_; }
  Complex v() const { return v_; }
  // |signal> (x) |idler> in the HH, HV, VH, VV ordering.
  Vector4c tensor(const PolarizationKet& idler) const;

 private:
  Complex h_;
  Complex v_;
};

inline constexpr double kHermitianTolerance = 1e-12;
inline constexpr double kTraceTolerance = 1e-10;
inline constexpr double kPsdTolerance = 1e-9;

// Physical two-qubit polarization state: Hermitian, unit trace, PSD.
class DensityMatrix4 {
 public:
  // Validates; throws DomainError on a nonphysical matrix.
  explicit DensityMatrix4(const Matrix4c& m);

  static DensityMatrix4 from_pure(const Vector4c& psi);

  const Matrix4c& matrix() const { return m_; }
  Complex operator()(int row, int col) const { return m_(row, col); }
  double min_eigenvalue() const;
  double frobenius_distance(const DensityMatrix4& other) const;

  // Returns an explanation when the matrix violates an invariant.
  static std::optional<std::string> check(const Matrix4c& m);

 private:
  Matrix4c m_;
};

// (|HH> + |VV>)/sqrt2.
DensityMatrix4 bell_state();

// Source state: diagonal 1/2 on HH and VV, coherence p/2 e^{-i phi}.
DensityMatrix4 model_state(double p, double phi_rad = 0.0);

// Coincidence probability behind polarizers at xi_s (signal) and xi_i (idler), degrees.
double coincidence_probability(const DensityMatrix4& rho, double xi_s_deg, double xi_i_deg);

// Contrast of the coincidence rate against the signal angle with the idler at 45 deg.
double visibility(const DensityMatrix4& rho);

double purity(const DensityMatrix4& rho);

}  // namespace spdc
