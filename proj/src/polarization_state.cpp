#include "spdc/polarization_state.hpp"

#include <cmath>
#include <sstream>

#include <Eigen/Eigenvalues>

namespace spdc {

PolarizationKet::PolarizationKet(Complex h, Complex v) : h_(h), v_(v) {
  const double norm = std::norm(h) + std::norm(v);
  if (std::abs(norm - 1.0) > 1e-12) throw DomainError("polarization ket must have unit norm");
}

PolarizationKet PolarizationKet::linear(double deg) {
  const double a = deg_to_rad(deg);
  return {std::cos(a), std::sin(a)};
}

PolarizationKet PolarizationKet::from_symbol(char symbol) {
  const double r = 1.0 / std::sqrt(2.0);
  switch (symbol) {
    case 'H': return {1.0, 0.0};
    case 'V': return {0.0, 1.0};
    case 'D': return {r, r};
    case 'A': return {r, -r};
    case 'R': return {r, Complex(0.0, -r)};
    case 'L': return {r, Complex(0.0, r)};
    default: break;
  }
  throw InputError(std::string("unknown polarization symbol '") + symbol + "'");
}

Vector4c PolarizationKet::tensor(const PolarizationKet& idler) const {
  Vector4c out;
  out << h_ * idler.h_, h_ * idler.v_, v_ * idler.h_, v_ * idler.v_;
  return out;
}

std::optional<std::string> DensityMatrix4::check(const Matrix4c& m) {
  if (!m.allFinite()) return "non-finite entries";
  const double herm = (m - m.adjoint()).cwiseAbs().maxCoeff();
  if (herm > kHermitianTolerance) {
    std::ostringstream s;
    s << "not Hermitian (max |rho - rho^dagger| = " << herm << ")";
    return s.str();
  }
  const double tr = m.trace().real();
  if (std::abs(tr - 1.0) > kTraceTolerance) {
    std::ostringstream s;
    s << "trace " << tr << " differs from 1";
    return s.str();
  }
  const Matrix4c h = 0.5 * (m + m.adjoint());
  const double min_eig = Eigen::SelfAdjointEigenSolver<Matrix4c>(h, Eigen::EigenvaluesOnly)
                             .eigenvalues()
                             .minCoeff();
  if (min_eig < -kPsdTolerance) {
    std::ostringstream s;
    s << "not positive semidefinite (min eigenvalue " << min_eig << ")";
    return s.str();
  }
  return std::nullopt;
}

DensityMatrix4::DensityMatrix4(const Matrix4c& m) : m_(m) {
  if (auto err = check(m)) throw DomainError("invalid density matrix: " + *err);
}

DensityMatrix4 DensityMatrix4::from_pure(const Vector4c& psi) {
  const Vector4c n = psi / psi.norm();
  return DensityMatrix4(n * n.adjoint());
}

double DensityMatrix4::min_eigenvalue() const {
  return Eigen::SelfAdjointEigenSolver<Matrix4c>(m_, Eigen::EigenvaluesOnly)
      .eigenvalues()
      .minCoeff();
}

double DensityMatrix4::frobenius_distance(const DensityMatrix4& other) const {
  return (m_ - other.m_).norm();
}

DensityMatrix4 bell_state() {
  Vector4c psi = Vector4c::Zero();
  psi(0) = psi(3) = 1.0 / std::sqrt(2.0);
  return DensityMatrix4::from_pure(psi);
}

DensityMatrix4 model_state(double p, double phi_rad) {
  if (!(p >= 0.0 && p <= 1.0)) throw DomainError("decoherence parameter p must lie in [0, 1]");
  Matrix4c m = Matrix4c::Zero();
  m(0, 0) = 0.5;
  m(3, 3) = 0.5;
  m(0, 3) = 0.5 * p * std::polar(1.0, -phi_rad);
  m(3, 0) = std::conj(m(0, 3));
  return DensityMatrix4(m);
}

double coincidence_probability(const DensityMatrix4& rho, double xi_s_deg, double xi_i_deg) {
  const Vector4c psi =
      PolarizationKet::linear(xi_s_deg).tensor(PolarizationKet::linear(xi_i_deg));
  return (psi.adjoint() * rho.matrix() * psi)(0, 0).real();
}

double visibility(const DensityMatrix4& rho) {
  const double pmax = coincidence_probability(rho, 45.0, 45.0);
  const double pmin = coincidence_probability(rho, 135.0, 45.0);
  const double den = pmax + pmin;
  // Rounding leaves ~1e-33 where the exact value is zero.
  if (!(den > 1e-14)) throw DomainError("visibility undefined: zero coincidence probability");
  return (pmax - pmin) / den;
}

double purity(const DensityMatrix4& rho) {
  return (rho.matrix() * rho.matrix()).trace().real();
}

}  // namespace spdc
