#include "doctest.h"

#include "oracles.hpp"
#include "spdc/source_model.hpp"

using namespace spdc;

namespace {

SourceConfig crystal(double mm) {
  SourceConfig cfg;
  cfg.crystal_length = Length::mm(mm);
  return cfg;
}

SourceConfig compensated(double generator_mm, double retarder_mm, RetarderOrientation o) {
  SourceConfig cfg = crystal(generator_mm);
  cfg.compensation = Compensation{Length::mm(retarder_mm), o};
  return cfg;
}

}  // namespace

TEST_CASE("zero length has no delay") {
  const auto d = propagation_delays(crystal(0));
  CHECK(d.tau_h == 0.0);
  CHECK(d.tau_v == 0.0);
  CHECK(decoherence_parameter(crystal(0)) == 1.0);
  CHECK(position_averaged_p(crystal(0)) == 1.0);
}

TEST_CASE("midpoint delay against the closed form") {
  for (double mm : {0.1, 0.5, 1.0, 2.0, 3.0}) {
    const double expect = oracle::delta_tau_mid(mm * 1e-3);
    CHECK(propagation_delays(crystal(mm)).difference() == doctest::Approx(expect).epsilon(1e-12));
  }
  CHECK(propagation_delays(crystal(0.5)).difference() * 1e15 == doctest::Approx(172).epsilon(0.01));
}

TEST_CASE("delays scale linearly with length") {
  const auto a = propagation_delays(crystal(0.5));
  const auto b = propagation_delays(crystal(3));
  CHECK(b.tau_h == doctest::Approx(6 * a.tau_h).epsilon(1e-13));
  CHECK(b.tau_v == doctest::Approx(6 * a.tau_v).epsilon(1e-13));
  CHECK(b.difference() == doctest::Approx(6 * a.difference()).epsilon(1e-12));
}

TEST_CASE("decoherence parameter") {
  CHECK(decoherence_parameter(crystal(0.5)) == doctest::Approx(0.73).epsilon(0.01));
  CHECK(decoherence_parameter(crystal(3)) == doctest::Approx(0.15).epsilon(0.02));
  const double expect = std::exp(-oracle::delta_tau_mid(1e-3) / 544e-15);
  CHECK(decoherence_parameter(crystal(1)) == doctest::Approx(expect).epsilon(1e-12));
}

TEST_CASE("p decreases with length and increases with coherence time") {
  double previous = 1.0 + 1e-12;
  for (double mm = 0.0; mm <= 4.0; mm += 0.25) {
    const double p = decoherence_parameter(crystal(mm));
    CHECK(p <= previous);
    CHECK(p > 0.0);
    previous = p;
  }
  SourceConfig cfg = crystal(1);
  previous = 0.0;
  for (double fs : {100.0, 300.0, 544.0, 1000.0, 5000.0}) {
    cfg.coherence_time_s = fs * 1e-15;
    const double p = decoherence_parameter(cfg);
    CHECK(p > previous);
    previous = p;
  }
}

TEST_CASE("sellmeier group indices give a nearby delay") {
  SourceConfig cfg = crystal(0.5);
  cfg.group_index_source = GroupIndexSource::sellmeier;
  const double a = propagation_delays(cfg).difference();
  const double b = propagation_delays(crystal(0.5)).difference();
  CHECK(std::abs(a - b) < 0.05 * b);
}

TEST_CASE("position average against the exact integral") {
  for (double mm : {0.5, 1.0, 2.0, 3.0}) {
    REQUIRE(oracle::delay_keeps_sign(mm * 1e-3));
    const double exact = oracle::p_position_exact(mm * 1e-3, 544e-15);
    CHECK(position_averaged_p(crystal(mm), 512) == doctest::Approx(exact).epsilon(1e-5));
    CHECK(position_averaged_p(crystal(mm)) == doctest::Approx(exact).epsilon(1e-4));
  }
}

TEST_CASE("position average never falls below the midpoint value") {
  for (double mm : {0.5, 1.0, 2.0, 3.0}) {
    const DelayReport r = delay_report(crystal(mm));
    CHECK(r.p_z >= r.p_mid);
    if (mm <= 1.0) CHECK(r.p_z - r.p_mid < 0.01);
  }
}

TEST_CASE("position average with infinite coherence") {
  SourceConfig cfg = crystal(3);
  cfg.coherence_time_s = 1e-3;
  CHECK(position_averaged_p(cfg) == doctest::Approx(1.0).epsilon(1e-8));
}

TEST_CASE("position grid must be fine enough") {
  CHECK_THROWS_AS(position_averaged_p(crystal(1), 31), DomainError);
  CHECK_NOTHROW(position_averaged_p(crystal(1), 32));
}

TEST_CASE("pump retarder") {
  const SourceConfig plain = crystal(1);
  const double tau_pre = 3e-3 * (1.77878 - 1.73901) / oracle::c0;
  const SourceConfig zero = compensated(1, 3, RetarderOrientation::compensating);
  CHECK(retarder_delay(zero) == doctest::Approx(tau_pre).epsilon(1e-12));
  CHECK(retarder_delay(zero) * 1e15 == doctest::Approx(398).epsilon(0.01));
  CHECK(retarder_delay(plain) == 0.0);

  const double dt = propagation_delays(plain).difference();
  CHECK(compensated_delay(zero) == doctest::Approx(std::abs(dt - tau_pre)));
  const SourceConfig ninety = compensated(1, 3, RetarderOrientation::enhancing);
  CHECK(compensated_delay(ninety) == doctest::Approx(dt + tau_pre));

  const SourceConfig none = compensated(1, 0, RetarderOrientation::compensating);
  CHECK(compensated_delay(none) == doctest::Approx(dt).epsilon(1e-14));
}

TEST_CASE("retarder orientation brackets the uncompensated p") {
  const double p0 = decoherence_parameter(compensated(1, 3, RetarderOrientation::compensating));
  const double p = decoherence_parameter(crystal(1));
  const double p90 = decoherence_parameter(compensated(1, 3, RetarderOrientation::enhancing));
  CHECK(p0 > p);
  CHECK(p > p90);
  for (double pre : {0.1, 0.5, 1.0, 2.0, 5.0}) {
    CHECK(decoherence_parameter(compensated(1, pre, RetarderOrientation::compensating)) >=
          decoherence_parameter(compensated(1, pre, RetarderOrientation::enhancing)));
  }
}

TEST_CASE("delay report fields") {
  const DelayReport r = delay_report(crystal(0.5));
  CHECK(r.tau_h > 0.0);
  CHECK(r.tau_v > 0.0);
  CHECK(r.delta_tau == doctest::Approx(std::abs(r.tau_h - r.tau_v)));
  CHECK(r.delta_tau_effective == r.delta_tau);
  CHECK(r.p_mid == doctest::Approx(std::exp(-r.delta_tau / 544e-15)));
  CHECK(r.p_mid <= 1.0);
  CHECK(r.p_z <= 1.0);
}

TEST_CASE("config validation") {
  SourceConfig cfg;
  cfg.validate();
  cfg.coherence_time_s = 0;
  CHECK_THROWS_AS(cfg.validate(), InputError);
  cfg = SourceConfig{};
  cfg.crystal_length = Length::mm(-1);
  CHECK_THROWS_AS(cfg.validate(), InputError);
  cfg = SourceConfig{};
  ReferenceTable t;
  t.ng_signal_o = 3.5;  // V < c/3
  cfg.material = cfg.material.with_reference_table(t);
  CHECK_THROWS_AS(cfg.validate(), InputError);
  cfg = SourceConfig{};
  cfg.beam_waist = Length::mm(0);
  CHECK_THROWS_AS(cfg.validate(), InputError);
}
