#include "spdc/tomography.hpp"

#include <cmath>
#include <limits>
#include <map>
#include <random>
#include <set>

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>

namespace spdc {

namespace {

constexpr double kProbabilityFloor = 1e-300;

// Row/column reversal, used to turn an L L^dagger factor into T^dagger T.
Matrix4c reversed(const Matrix4c& m) { return m.colwise().reverse().rowwise().reverse(); }

}  // namespace

Matrix4c TriangularParam::lower() const {
  Matrix4c t = Matrix4c::Zero();
  for (int i = 0; i < 4; ++i) t(i, i) = values[i];
  std::size_t k = 4;
  for (int i = 1; i < 4; ++i) {
    for (int j = 0; j < i; ++j, k += 2) t(i, j) = Complex(values[k], values[k + 1]);
  }
  return t;
}

TriangularParam TriangularParam::from_lower(const Matrix4c& t) {
  TriangularParam p;
  for (int i = 0; i < 4; ++i) p.values[i] = t(i, i).real();
  std::size_t k = 4;
  for (int i = 1; i < 4; ++i) {
    for (int j = 0; j < i; ++j, k += 2) {
      p.values[k] = t(i, j).real();
      p.values[k + 1] = t(i, j).imag();
    }
  }
  return p;
}

TriangularParam TriangularParam::factor(const Matrix4c& rho) {
  // J rho J = L L^dagger  =>  rho = (J L^dagger J)^dagger (J L^dagger J).
  const Eigen::LLT<Matrix4c> llt(reversed(rho));
  if (llt.info() != Eigen::Success) throw DomainError("matrix is not positive definite");
  const Matrix4c l = llt.matrixL();
  return from_lower(reversed(l.adjoint()));
}

DensityMatrix4 rho_from_T(const TriangularParam& t) {
  const Matrix4c lower = t.lower();
  const Matrix4c m = lower.adjoint() * lower;
  const double tr = m.trace().real();
  if (!(tr > 0.0)) throw DomainError("degenerate parametrization");
  Matrix4c rho = m / tr;
  rho = 0.5 * (rho + rho.adjoint()).eval();
  return DensityMatrix4(rho);
}

double basis_normalization(const CountRecords& data) {
  std::map<std::string, double> by_label;
  for (const auto& r : data) by_label[r.label] += static_cast<double>(r.count);
  double sum = 0.0;
  for (const char* l : kBasisLabels) {
    auto it = by_label.find(l);
    if (it == by_label.end()) {
      throw InputError(std::string("normalization needs a count for setting ") + l);
    }
    sum += it->second;
  }
  if (!(sum > 0.0)) throw InputError("no counts in the HH/HV/VH/VV settings");
  return sum;
}

LogLikelihood::LogLikelihood(const CountRecords& data, const std::vector<Projector>& set) {
  std::map<std::string, const Projector*> by_label;
  for (const auto& p : set) by_label[p.label()] = &p;
  for (const auto& r : data) {
    auto it = by_label.find(r.label);
    if (it == by_label.end()) throw InputError("count for unknown setting '" + r.label + "'");
    kets_.push_back(it->second->ket());
    counts_.push_back(static_cast<double>(r.count));
    total_ += static_cast<double>(r.count);
  }
  if (!(total_ > 0.0)) throw InputError("likelihood needs at least one nonzero count");
  nhat_ = basis_normalization(data);
}

double LogLikelihood::operator()(const TriangularParam& t) const { return (*this)(t.lower()); }

double LogLikelihood::operator()(const Matrix4c& t) const {
  const double trace = t.squaredNorm();  // Tr(T^dagger T)
  if (!(trace > 0.0)) return -std::numeric_limits<double>::infinity();
  double log_term = 0.0;
  double measured_trace = 0.0;
  for (std::size_t mu = 0; mu < kets_.size(); ++mu) {
    const double prob = (t * kets_[mu]).squaredNorm();  // Tr(T^dagger T P_mu)
    measured_trace += prob;
    if (counts_[mu] > 0.0) {
      if (prob <= 0.0) return -std::numeric_limits<double>::infinity();
      log_term += counts_[mu] * std::log(std::max(prob, kProbabilityFloor));
    }
  }
  return log_term - total_ * trace - nhat_ * measured_trace / trace;
}

double LogLikelihood::optimal_scale_squared(const Matrix4c& t) const {
  return total_ / (lagrange_multiplier() * t.squaredNorm());
}

double log_likelihood(const TriangularParam& t, const CountRecords& data,
                      const std::vector<Projector>& set) {
  return LogLikelihood(data, set)(t);
}

LinearInversion linear_inversion(const CountRecords& data, const std::vector<Projector>& set,
                                 const DualBasis& dual) {
  std::map<std::string, double> by_label;
  for (const auto& r : data) by_label[r.label] += static_cast<double>(r.count);
  std::string missing;
  for (const auto& p : set) {
    if (!by_label.count(p.label())) missing += (missing.empty() ? "" : ", ") + p.label();
  }
  if (!missing.empty()) throw InputError("missing counts for settings: " + missing);

  const double nhat = basis_normalization(data);
  std::vector<double> freq;
  freq.reserve(set.size());
  for (const auto& p : set) freq.push_back(by_label[p.label()] / nhat);

  LinearInversion out;
  const Matrix4c raw = dual.combine(freq);
  out.matrix = 0.5 * (raw + raw.adjoint());
  out.trace = out.matrix.trace().real();
  out.min_eigenvalue =
      Eigen::SelfAdjointEigenSolver<Matrix4c>(out.matrix, Eigen::EigenvaluesOnly)
          .eigenvalues()
          .minCoeff();
  out.physical = out.min_eigenvalue >= -kPsdTolerance;
  return out;
}

Matrix4c project_to_physical(const Matrix4c& m, double floor) {
  const Matrix4c h = 0.5 * (m + m.adjoint());
  const Eigen::SelfAdjointEigenSolver<Matrix4c> es(h);
  Eigen::Vector4d ev = es.eigenvalues();
  for (int i = 0; i < 4; ++i) ev(i) = std::max(ev(i), floor);
  ev /= ev.sum();
  const Matrix4c v = es.eigenvectors();
  return v * ev.cast<Complex>().asDiagonal() * v.adjoint();
}

const char* to_string(Optimizer o) {
  return o == Optimizer::simplex ? "simplex" : "annealing";
}

namespace {

TriangularParam to_param(std::span<const double> x) {
  TriangularParam p;
  std::copy(x.begin(), x.end(), p.values.begin());
  return p;
}

std::vector<double> to_vector(const TriangularParam& p) {
  return {p.values.begin(), p.values.end()};
}

MleResult finish(const LogLikelihood& like, const TriangularParam& found, long evaluations,
                 int restarts, const MleOptions& opts) {
  const Matrix4c t = found.lower();
  MleDiagnostics d;
  d.trace_from_search = t.squaredNorm();
  // L(sT) = N ln s^2 - lambda s^2 Tr(T^dagger T) + (scale-free terms) has its
  // maximum at s^2 = N / (lambda Tr(T^dagger T)).
  const double s2 = like.optimal_scale_squared(t);
  const Matrix4c scaled = t * std::sqrt(s2);
  const TriangularParam param = TriangularParam::from_lower(scaled);
  d.trace_before_normalization = scaled.squaredNorm();
  d.final_log_likelihood = like(scaled);
  d.iterations = evaluations;
  d.optimizer = opts.optimizer;
  d.restarts = restarts;
  d.seed = opts.seed;
  return MleResult{rho_from_T(param), param, d};
}

}  // namespace

MleResult mle_reconstruct(const CountRecords& data, const std::vector<Projector>& set,
                          const MleOptions& opts) {
  const LogLikelihood like(data, set);
  const Objective negative = [&like](std::span<const double> x) { return -like(to_param(x)); };

  // Start from the Cholesky factor of the physical part of the linear estimate.
  Matrix4c start;
  try {
    const auto li = linear_inversion(data, set, dual_basis(set));
    start = project_to_physical(li.matrix);
  } catch (const InputError&) {
    start = Matrix4c::Identity() / 4.0;
  }
  const std::vector<double> x0 = to_vector(TriangularParam::factor(start));

  std::mt19937_64 rng(opts.seed);
  SimplexResult best = opts.optimizer == Optimizer::simplex
                           ? nelder_mead(negative, x0, opts.simplex)
                           : anneal(negative, x0, opts.simplex, opts.annealing, rng);
  long evaluations = best.evaluations;

  // Restart a fresh simplex at the best point until it stops improving.
  int restarts = 0;
  bool settled = opts.max_restarts == 0 && best.converged;
  while (restarts < opts.max_restarts) {
    ++restarts;
    SimplexResult again = nelder_mead(negative, best.x, opts.simplex);
    evaluations += again.evaluations;
    const double gain = best.value - again.value;
    const double tol = opts.simplex.rel_tol * std::abs(best.value) + opts.simplex.abs_tol;
    if (again.value < best.value) best = again;
    if (again.converged && gain <= tol) {
      settled = true;
      break;
    }
  }
  if (!std::isfinite(best.value)) {
    throw ConvergenceError("likelihood search found no admissible point",
                           finish(like, TriangularParam::factor(start), evaluations, restarts, opts));
  }
  MleResult result = finish(like, to_param(best.x), evaluations, restarts, opts);
  if (!settled) {
    throw ConvergenceError("likelihood search did not converge after " +
                               std::to_string(restarts) + " restarts",
                           std::move(result));
  }
  return result;
}

}  // namespace spdc
