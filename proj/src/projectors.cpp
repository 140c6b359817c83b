#include "spdc/projectors.hpp"

#include <Eigen/Dense>

namespace spdc {

Projector::Projector(std::string label, PolarizationKet signal, PolarizationKet idler)
    : label_(std::move(label)), signal_(signal), idler_(idler), ket_(signal.tensor(idler)) {}

Projector Projector::from_label(const std::string& label) {
  if (label.size() != 2) throw InputError("projector label must have two symbols: " + label);
  return Projector(label, PolarizationKet::from_symbol(label[0]),
                   PolarizationKet::from_symbol(label[1]));
}

double Projector::expectation(const Matrix4c& rho) const {
  return (ket_.adjoint() * rho * ket_)(0, 0).real();
}

std::vector<Projector> standard_set() {
  static const std::array<const char*, kTomographySettings> labels = {
      "HH", "HV", "VV", "VH", "RH", "RV", "DV", "DH",
      "DR", "DD", "RD", "HD", "VD", "VL", "HL", "RL"};
  std::vector<Projector> out;
  out.reserve(labels.size());
  for (const char* l : labels) out.push_back(Projector::from_label(l));
  return out;
}

Eigen::MatrixXd gram_matrix(const std::vector<Projector>& set) {
  const auto n = static_cast<Eigen::Index>(set.size());
  Eigen::MatrixXd g(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      g(i, j) = std::norm(set[i].ket().dot(set[j].ket()));
    }
  }
  return g;
}

Matrix4c DualBasis::combine(const std::vector<double>& values) const {
  if (values.size() != operators.size()) throw DomainError("value count does not match dual basis");
  Matrix4c out = Matrix4c::Zero();
  for (std::size_t i = 0; i < values.size(); ++i) out += values[i] * operators[i];
  return out;
}

DualBasis dual_basis(const std::vector<Projector>& set) {
  if (set.size() != kTomographySettings) {
    throw DomainError("projector set not informationally complete");
  }
  const Eigen::MatrixXd g = gram_matrix(set);
  const Eigen::JacobiSVD<Eigen::MatrixXd> svd(g);
  const auto& sv = svd.singularValues();
  if (!(sv(sv.size() - 1) > 1e-10 * sv(0))) {
    throw DomainError("projector set not informationally complete");
  }
  // Gamma_nu = sum_mu (G^-1)_{mu nu} P_mu, so Tr[P_a Gamma_nu] = (G G^-1)_{a nu}.
  const Eigen::MatrixXd ginv = g.inverse();
  DualBasis dual;
  dual.operators.resize(set.size());
  for (std::size_t nu = 0; nu < set.size(); ++nu) {
    Matrix4c gamma = Matrix4c::Zero();
    for (std::size_t mu = 0; mu < set.size(); ++mu) {
      gamma += ginv(static_cast<Eigen::Index>(mu), static_cast<Eigen::Index>(nu)) * set[mu].matrix();
    }
    dual.operators[nu] = gamma;
  }
  return dual;
}

}  // namespace spdc
