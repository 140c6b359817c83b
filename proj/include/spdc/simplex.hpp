#pragma once

// Downhill simplex minimization, optionally with thermal fluctuations on the
// vertex comparisons (simulated annealing in the simplex).

#include <cstdint>
#include <functional>
#include <random>
#include <span>
#include <vector>

namespace spdc {

using Objective = std::function<double(std::span<const double>)>;

struct SimplexOptions {
  double scale = 0.05;            // initial edge length per coordinate
  double rel_tol = 1e-9;          // stop when spread < rel_tol * |f_best| + abs_tol
  double abs_tol = 1e-12;
  long max_evaluations = 400000;
};

struct AnnealingOptions {
  int probes = 50;                // random probes used to set the initial temperature
  int steps_per_temperature = 200;
  double cooling = 0.85;          // geometric factor per temperature stage
  double floor_ratio = 1e-6;      // stop annealing below floor_ratio * T0
};

struct SimplexResult {
  std::vector<double> x;
  double value = 0.0;
  long evaluations = 0;
  bool converged = false;
};

class Simplex {
 public:
  Simplex(const Objective& f, std::vector<double> origin, double scale);

  // One reflection/expansion/contraction/shrink move. Vertex values are
  // raised and trial values lowered by temperature * Exp(1) fluctuations;
  // temperature 0 is the plain Nelder-Mead move.
  void step(double temperature, std::mt19937_64* rng);

  // Spread of the stored (unfluctuated) vertex values.
  double spread() const;
  bool converged(double rel_tol, double abs_tol) const;

  // Best point ever evaluated (not necessarily a current vertex).
  const std::vector<double>& best_point() const { return best_x_; }
  double best_value() const { return best_f_; }
  long evaluations() const { return evaluations_; }

 private:
  double evaluate(const std::vector<double>& x);

  Objective f_;
  std::vector<std::vector<double>> points_;
  std::vector<double> values_;
  std::vector<double> best_x_;
  double best_f_;
  long evaluations_ = 0;
};

// Plain Nelder-Mead from x0 until the spread criterion holds.
SimplexResult nelder_mead(const Objective& f, const std::vector<double>& x0,
                          const SimplexOptions& opts);

// Annealed simplex with geometric cooling followed by a zero-temperature
// descent to convergence.
SimplexResult anneal(const Objective& f, const std::vector<double>& x0,
                     const SimplexOptions& simplex, const AnnealingOptions& opts,
                     std::mt19937_64& rng);

}  // namespace spdc
