#include "doctest.h"

#include <cmath>

#include "spdc/simplex.hpp"

using namespace spdc;

namespace {

double rosenbrock(std::span<const double> x) {
  return 100 * std::pow(x[1] - x[0] * x[0], 2) + std::pow(1 - x[0], 2);
}

double bowl(std::span<const double> x) {
  double s = 0;
  for (std::size_t i = 0; i < x.size(); ++i) s += (i + 1) * std::pow(x[i] - 0.1 * i, 2);
  return s;
}

// Two wells; the deeper one at x = +2.
double double_well(std::span<const double> x) {
  const double a = x[0];
  return std::pow(a * a - 4, 2) - 2 * a + 0.5 * x[1] * x[1];
}

}  // namespace

TEST_CASE("nelder-mead finds the rosenbrock minimum") {
  SimplexOptions o;
  o.scale = 0.5;
  o.rel_tol = 1e-14;
  o.abs_tol = 1e-20;
  const auto r = nelder_mead(rosenbrock, {-1.2, 1.0}, o);
  CHECK(r.converged);
  CHECK(r.x[0] == doctest::Approx(1.0).epsilon(1e-4));
  CHECK(r.x[1] == doctest::Approx(1.0).epsilon(1e-4));
  CHECK(r.value < 1e-8);
}

TEST_CASE("nelder-mead in 16 dimensions") {
  SimplexOptions o;
  o.scale = 0.3;
  o.rel_tol = 1e-14;
  o.abs_tol = 1e-16;
  SimplexResult r = nelder_mead(bowl, std::vector<double>(16, 1.0), o);
  for (int k = 0; k < 5 && r.value > 1e-10; ++k) r = nelder_mead(bowl, r.x, o);
  CHECK(r.value < 1e-10);
  for (int i = 0; i < 16; ++i) CHECK(std::abs(r.x[i] - 0.1 * i) < 1e-4);
}

TEST_CASE("evaluation budget") {
  SimplexOptions o;
  o.max_evaluations = 40;
  o.rel_tol = 1e-15;
  const auto r = nelder_mead(rosenbrock, {-1.2, 1.0}, o);
  CHECK_FALSE(r.converged);
  CHECK(r.evaluations <= 40 + 3);
}

TEST_CASE("best point is never worse than the start") {
  Simplex s(rosenbrock, {-1.2, 1.0}, 0.1);
  const double start = rosenbrock(std::vector<double>{-1.2, 1.0});
  for (int i = 0; i < 50; ++i) {
    s.step(0.0, nullptr);
    CHECK(s.best_value() <= start);
  }
  CHECK(s.spread() >= 0.0);
}

TEST_CASE("annealing escapes the shallow well") {
  // Deeper minimum: 4a(a^2 - 4) = 2, a = 2.0608.
  SimplexOptions o;
  o.scale = 1.0;  // probes span the barrier, so T0 is comparable to its height
  AnnealingOptions a;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    std::mt19937_64 rng(seed);
    const auto r = anneal(double_well, {-2.0, 0.3}, o, a, rng);
    CHECK(r.x[0] == doctest::Approx(2.0608).epsilon(1e-3));
  }
  // Plain descent from the same start stays in the shallow well.
  o.scale = 0.5;
  const auto d = nelder_mead(double_well, {-2.0, 0.3}, o);
  CHECK(d.x[0] < 0.0);
}

TEST_CASE("annealing is reproducible for a seed") {
  SimplexOptions o;
  AnnealingOptions a;
  a.steps_per_temperature = 50;
  std::mt19937_64 r1(9), r2(9);
  const auto x = anneal(rosenbrock, {0.0, 0.0}, o, a, r1);
  const auto y = anneal(rosenbrock, {0.0, 0.0}, o, a, r2);
  CHECK(x.x == y.x);
  CHECK(x.value == y.value);
  CHECK(x.evaluations == y.evaluations);
}
