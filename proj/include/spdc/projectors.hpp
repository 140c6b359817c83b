#pragma once

// Two-qubit product projectors used for tomography and their dual basis.

#include <array>
#include <string>
#include <vector>

#include "spdc/polarization_state.hpp"

namespace spdc {

class Projector {
 public:
  Projector(std::string label, PolarizationKet signal, PolarizationKet idler);

  // Two-letter label such as "HH" or "RD", signal first.
  static Projector from_label(const std::string& label);

  const std::string& label() const { return label_; }
  const PolarizationKet& signal() const { return signal_; }
  const PolarizationKet& idler() const { return idler_; }
  const Vector4c& ket() const { return ket_; }
  Matrix4c matrix() const { return ket_ * ket_.adjoint(); }

  // Tr[rho P] = <psi| rho |psi>.
  double expectation(const Matrix4c& rho) const;

 private:
  std::string label_;
  PolarizationKet signal_;
  PolarizationKet idler_;
  Vector4c ket_;
};

inline constexpr std::size_t kTomographySettings = 16;

// The common 16-setting product set over H, V, D and circular states.
// Order: HH HV VV VH RH RV DV DH DR DD RD HD VD VL HL RL.
std::vector<Projector> standard_set();

// G_{mu nu} = Tr[P_mu P_nu].
Eigen::MatrixXd gram_matrix(const std::vector<Projector>& set);

struct DualBasis {
  std::vector<Matrix4c> operators;  // Gamma_mu, Tr[P_mu Gamma_nu] = delta_mu_nu

  // sum_mu values[mu] Gamma_mu.
  Matrix4c combine(const std::vector<double>& values) const;
};

// Throws DomainError("projector set not informationally complete") when the
// 16 projectors do not span the Hermitian operators.
DualBasis dual_basis(const std::vector<Projector>& set);

}  // namespace spdc
