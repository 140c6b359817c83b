#include "doctest.h"

#include <random>

#include "oracles.hpp"
#include "spdc/bell_chsh.hpp"

using namespace spdc;

TEST_CASE("correlation examples") {
  const DensityMatrix4 bell = model_state(1);
  for (double a : {0.0, 17.0, 45.0, 100.0}) {
    CHECK(correlation_E(bell, a, a) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(std::abs(correlation_E(bell, a, a + 45)) < 1e-12);
  }
  CHECK(correlation_E(model_state(0.77), 0, 24) == doctest::Approx(std::cos(oracle::rad(48))).epsilon(1e-12));
  CHECK(correlation_E(model_state(0.77), 0, 24) == doctest::Approx(0.669).epsilon(1e-3));
}

TEST_CASE("correlation agrees with the closed form for model states") {
  for (double p : {0.0, 0.3, 0.77, 1.0}) {
    for (double a = -90; a <= 90; a += 13.7) {
      for (double b = -90; b <= 90; b += 11.3) {
        CHECK(correlation_E(model_state(p), a, b) == doctest::Approx(oracle::E_closed(p, a, b)).epsilon(1e-12));
      }
    }
  }
}

TEST_CASE("correlation is bounded and periodic on random states") {
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> angle(0, 180);
  for (int k = 0; k < 200; ++k) {
    const DensityMatrix4 rho(oracle::random_state(rng, 1 + k % 4));
    const double a = angle(rng), b = angle(rng);
    const double e = correlation_E(rho, a, b);
    CHECK(std::abs(e) <= 1 + 1e-12);
    CHECK(correlation_E(rho, a + 180, b) == doctest::Approx(e).epsilon(1e-12));
  }
}

TEST_CASE("theta scheme") {
  const auto s = ChshSettings::theta_scheme(24);
  CHECK(s.a == 0);
  CHECK(s.b == 24);
  CHECK(s.a_prime == 48);
  CHECK(s.b_prime == 72);
  const auto angles = s.acquisition_angles();
  REQUIRE(angles.size() == 16);
  CHECK(angles[0] == std::pair(0.0, 24.0));
  CHECK(angles[1] == std::pair(90.0, 114.0));
  CHECK(angles[2] == std::pair(0.0, 114.0));
  CHECK(angles[3] == std::pair(90.0, 24.0));
  CHECK(angles[4] == std::pair(0.0, 72.0));
  CHECK(angles[15] == std::pair(138.0, 72.0));
}

TEST_CASE("S examples") {
  CHECK(chsh_S(model_state(1), ChshSettings::theta_scheme(22.5)) == doctest::Approx(2 * std::sqrt(2.0)).epsilon(1e-12));
  CHECK(chsh_S(model_state(1), ChshSettings::theta_scheme(0)) == doctest::Approx(2.0).epsilon(1e-12));
  const double s16 = chsh_S(model_state(0.77), ChshSettings::theta_scheme(16));
  CHECK(s16 == doctest::Approx(2.33).epsilon(0.003));
  CHECK(std::abs(s16 - 2.38) < 0.10);
  const double s24 = chsh_S(model_state(0.77), ChshSettings::theta_scheme(24));
  CHECK(std::abs(s24 - 2.417) < 0.10);
  // p = 0.5 is the average of the pure and mixed curves.
  const double mixed = oracle::S_closed(0.0, 22.5);
  CHECK(chsh_S(model_state(0.5), ChshSettings::theta_scheme(22.5)) ==
        doctest::Approx(0.5 * 2 * std::sqrt(2.0) + 0.5 * mixed).epsilon(1e-12));
  CHECK(chsh_S(model_state(0.5), ChshSettings::theta_scheme(22.5)) == doctest::Approx(3 / std::sqrt(2.0)));
}

TEST_CASE("S from 16 probabilities equals the closed form") {
  for (double p : {0.0, 0.5, 0.7, 0.77, 1.0}) {
    for (double th = 0; th <= 90; th += 2.5) {
      CHECK(chsh_S(model_state(p), ChshSettings::theta_scheme(th)) ==
            doctest::Approx(oracle::S_closed(p, th)).epsilon(1e-10));
    }
  }
}

TEST_CASE("Tsirelson bound") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> angle(0, 180);
  for (int k = 0; k < 300; ++k) {
    const DensityMatrix4 rho(oracle::random_state(rng, 1 + k % 2));
    ChshSettings s{angle(rng), angle(rng), angle(rng), angle(rng)};
    CHECK(std::abs(chsh_S(rho, s)) <= 2 * std::sqrt(2.0) + 1e-9);
  }
}

TEST_CASE("scan") {
  std::vector<double> grid;
  for (int i = 0; i <= 180; ++i) grid.push_back(i * 0.5);
  for (double p : {0.5, 0.7, 1.0}) {
    const auto curve = chsh_scan(p, grid);
    REQUIRE(curve.size() == grid.size());
    for (const auto& pt : curve) CHECK(std::abs(pt.s) <= 2 * std::sqrt(2.0) + 1e-9);
  }
  const auto pure = chsh_scan(1.0, grid);
  auto best = std::max_element(pure.begin(), pure.end(), [](auto& a, auto& b) { return a.s < b.s; });
  CHECK(best->theta_deg == 22.5);
  // Curves are ordered by p near the maximum.
  const auto c7 = chsh_scan(0.7, {22.5});
  const auto c5 = chsh_scan(0.5, {22.5});
  CHECK(pure[45].s > c7[0].s);
  CHECK(c7[0].s > c5[0].s);
}

TEST_CASE("violation significance") {
  CHECK(violation_significance(2.417, 0.025) == doctest::Approx(16.68).epsilon(1e-3));
  CHECK(violation_significance(2.38, 0.03) == doctest::Approx(12.67).epsilon(1e-3));
  CHECK(violation_significance(2.0, 0.1) == 0.0);
  CHECK_THROWS_AS(violation_significance(2.4, 0.0), DomainError);
  CHECK_THROWS_AS(violation_significance(2.4, -1.0), DomainError);
}
