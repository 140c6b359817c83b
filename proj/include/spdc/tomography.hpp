#pragma once

// Maximum-likelihood reconstruction of the two-photon polarization state from
// coincidence counts, with linear inversion as the starting point.
//
// The state is written as rho = T^dagger T / Tr(T^dagger T) with T lower
// triangular and real on the diagonal: 4 + 2*6 = 16 real parameters, the same
// count as a 4x4 Hermitian matrix. The objective is
//
//   L(T) = sum_mu n_mu ln Tr(T^dagger T P_mu) - lambda Tr(T^dagger T)
//          - Nhat Tr(T^dagger T S) / Tr(T^dagger T),     S = sum_mu P_mu,
//
// with lambda = N, the total number of recorded events. The first two terms
// put the maximum on the ray at Tr(T^dagger T) = 1. The last term does not
// depend on scale; it accounts for equal-time acquisition when S is not
// proportional to the identity, as for the standard 16-setting set. Nhat is
// the event rate per unit probability, estimated from the HH+HV+VH+VV counts.

#include <array>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "spdc/polarization_state.hpp"
#include "spdc/projectors.hpp"
#include "spdc/simplex.hpp"

namespace spdc {

struct TriangularParam {
  static constexpr std::size_t kSize = 16;
  // [0..3] real diagonal, then (re, im) of T(1,0), T(2,0), T(2,1), T(3,0), T(3,1), T(3,2).
  std::array<double, kSize> values{};

  Matrix4c lower() const;
  static TriangularParam from_lower(const Matrix4c& t);
  // T with T^dagger T = rho for a positive definite rho.
  static TriangularParam factor(const Matrix4c& rho);
};

// T^dagger T normalized to unit trace. Throws DomainError for T = 0.
DensityMatrix4 rho_from_T(const TriangularParam& t);

struct CountRecord {
  std::string label;
  std::uint64_t count = 0;
  std::optional<double> duration_s;
};
using CountRecords = std::vector<CountRecord>;

// Events per unit probability, from the HH, HV, VH, VV counts.
double basis_normalization(const CountRecords& data);

class LogLikelihood {
 public:
  // Every record label must name a projector in `set`; the four
  // computational-basis labels must be present and at least one count nonzero.
  LogLikelihood(const CountRecords& data, const std::vector<Projector>& set);

  double operator()(const TriangularParam& t) const;
  double operator()(const Matrix4c& t) const;

  double total_events() const { return total_; }
  double lagrange_multiplier() const { return total_; }
  double normalization() const { return nhat_; }
  // Scale s^2 maximizing L(s T) along the ray: N / (lambda Tr T^dagger T).
  double optimal_scale_squared(const Matrix4c& t) const;

 private:
  std::vector<Vector4c> kets_;
  std::vector<double> counts_;
  double total_ = 0.0;
  double nhat_ = 0.0;
};

double log_likelihood(const TriangularParam& t, const CountRecords& data,
                      const std::vector<Projector>& set);

struct LinearInversion {
  Matrix4c matrix;        // sum_mu (n_mu / Nhat) Gamma_mu, Hermitian part
  bool physical = false;  // PSD within tolerance
  double min_eigenvalue = 0.0;
  double trace = 0.0;
};

// Throws InputError listing missing projector labels.
LinearInversion linear_inversion(const CountRecords& data, const std::vector<Projector>& set,
                                 const DualBasis& dual);

// Eigenvalues clipped below at `floor`, then trace-normalized.
Matrix4c project_to_physical(const Matrix4c& m, double floor = 1e-6);

enum class Optimizer { simplex, annealing };
const char* to_string(Optimizer o);

struct MleOptions {
  Optimizer optimizer = Optimizer::simplex;
  std::uint64_t seed = 1;
  int max_restarts = 50;  // 16-D Nelder-Mead stalls; fresh simplices keep improving for ~20 rounds
  SimplexOptions simplex;
  AnnealingOptions annealing;
};

struct MleDiagnostics {
  double final_log_likelihood = 0.0;
  long iterations = 0;  // objective evaluations
  Optimizer optimizer = Optimizer::simplex;
  int restarts = 0;
  // Tr(T^dagger T) as returned by the search, and after the closed-form
  // maximization along the scale ray.
  double trace_from_search = 0.0;
  double trace_before_normalization = 0.0;
  std::uint64_t seed = 0;
};

struct MleResult {
  DensityMatrix4 rho;
  TriangularParam t;
  MleDiagnostics diagnostics;
};

class ConvergenceError : public std::runtime_error {
 public:
  ConvergenceError(const std::string& what, MleResult best)
      : std::runtime_error(what), best_(std::move(best)) {}
  const MleResult& best() const { return best_; }

 private:
  MleResult best_;
};

MleResult mle_reconstruct(const CountRecords& data, const std::vector<Projector>& set,
                          const MleOptions& opts = {});

}  // namespace spdc
