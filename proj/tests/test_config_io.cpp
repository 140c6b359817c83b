#include "doctest.h"

#include <random>
#include <sstream>

#include "oracles.hpp"
#include "spdc/config.hpp"
#include "spdc/io.hpp"

using namespace spdc;

TEST_CASE("empty document gives the defaults") {
  const RunConfig rc = parse_run_config("");
  CHECK(rc.source.crystal_length.millimeters() == doctest::Approx(0.5));
  CHECK(rc.source.coherence_time_s == doctest::Approx(544e-15));
  CHECK(rc.crystal_lengths.size() == 3);
  CHECK_FALSE(rc.source.compensation.has_value());
  CHECK_FALSE(rc.state_p.has_value());
  CHECK(rc.hash == sha256_hex(""));
}

TEST_CASE("keys are read") {
  const RunConfig rc = parse_run_config(
      "# comment\n"
      "[crystal]\nlength_mm = 1\nlengths_mm = 0.5, 2\n"
      "[pump]\ncoherence_time_fs = 600\n"
      "[compensation]\nlength_mm = 3\norientation_deg = 90\n"
      "[spectrum]\nidler_geometry = fixed_reference\n"
      "[source]\nstate_p = 0.4\n"
      "[tomography]\noptimizer = annealing\nmax_restarts = 2\n"
      "[simulation]\np_values = 1, 0.2\nbell_thetas_deg = 22.5\n"
      "[interference]\ntau_half_span_fs = 250\ntau_points = 4096\n");
  CHECK(rc.source.crystal_length.millimeters() == doctest::Approx(1));
  REQUIRE(rc.crystal_lengths.size() == 2);
  CHECK(rc.crystal_lengths[1].millimeters() == doctest::Approx(2));
  CHECK(rc.source.coherence_time_s == doctest::Approx(600e-15));
  REQUIRE(rc.source.compensation.has_value());
  CHECK(rc.source.compensation->orientation == RetarderOrientation::enhancing);
  CHECK(rc.source.compensation->length.millimeters() == doctest::Approx(3));
  CHECK(rc.source.idler_geometry == IdlerGeometry::fixed_reference);
  CHECK(*rc.state_p == doctest::Approx(0.4));
  CHECK(rc.tomography.mle.optimizer == Optimizer::annealing);
  CHECK(rc.tomography.mle.max_restarts == 2);
  CHECK(rc.simulation.p_values == std::vector<double>{1.0, 0.2});
  CHECK(rc.simulation.bell_thetas_deg == std::vector<double>{22.5});
  CHECK(rc.interference.tau_half_span_s == doctest::Approx(250e-15));
  CHECK(rc.interference.tau_points == 4096);
}

TEST_CASE("compensation orientation") {
  CHECK(parse_run_config("[compensation]\norientation_deg = 0\n").source.compensation->orientation ==
        RetarderOrientation::compensating);
  CHECK_THROWS_AS(parse_run_config("[compensation]\norientation_deg = 45\n"), InputError);
}

TEST_CASE("malformed documents") {
  CHECK_THROWS_AS(parse_run_config("[crystal]\nlenght_mm = 1\n"), InputError);
  CHECK_THROWS_AS(parse_run_config("[nonsense]\nx = 1\n"), InputError);
  CHECK_THROWS_AS(parse_run_config("x = 1\n"), InputError);
  CHECK_THROWS_AS(parse_run_config("[crystal]\nlength_mm = 1mm\n"), InputError);
  CHECK_THROWS_AS(parse_run_config("[crystal]\nlength_mm = -1\n"), InputError);
  CHECK_THROWS_AS(parse_run_config("[crystal\nlength_mm = 1\n"), InputError);
  CHECK_THROWS_AS(parse_run_config("[crystal]\nposition_grid = 64.5\n"), InputError);
  CHECK_THROWS_AS(parse_run_config("[crystal]\nposition_grid = 16\n"), InputError);
  CHECK_THROWS_AS(parse_run_config("[source]\nstate_p = 1.5\n"), InputError);
  CHECK_THROWS_AS(parse_run_config("[tomography]\noptimizer = newton\n"), InputError);
  CHECK_THROWS_AS(parse_run_config("[sellmeier]\no = 1, 2, 3\n"), InputError);
  CHECK_THROWS_AS(parse_run_config("[reference_table]\nng_pump_o = 3.5\n"), InputError);
  CHECK_THROWS_AS(load_run_config("/nonexistent/config.ini"), InputError);
}

TEST_CASE("sha256") {
  CHECK(sha256_hex("abc") == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
  CHECK(sha256_hex("") == "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
}

TEST_CASE("material section") {
  const MaterialModel m = parse_material("");
  CHECK(m.cut_angle_rad() == doctest::Approx(MaterialModel::bbo().cut_angle_rad()));
  const MaterialModel cut = parse_material("[crystal]\ncut_angle_deg = 29.5\n");
  CHECK(cut.cut_angle_rad() == doctest::Approx(29.5 * oracle::pi / 180));
  const MaterialModel t = parse_material("[reference_table]\nn_pump_o = 1.7\n");
  CHECK(t.reference_table().n_pump_o == doctest::Approx(1.7));
  // Ordinary and extraordinary swapped: no angle makes n_e(405) small enough.
  CHECK_THROWS_AS(parse_material("[sellmeier]\no = 2.3753, 0.01224, 0.01667, 0.01516\n"
                                 "e = 2.7359, 0.01878, 0.01822, 0.01354\n"),
                  InputError);
}

TEST_CASE("density matrix round trip is exact") {
  std::mt19937_64 rng(5);
  for (int k = 0; k < 20; ++k) {
    const Matrix4c rho = oracle::random_state(rng, 1 + k % 4);
    const nlohmann::json doc = nlohmann::json::parse(matrix_to_json(rho).dump());
    const Matrix4c back = matrix_from_json(doc);
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) CHECK(back(i, j) == rho(i, j));
    CHECK_NOTHROW(density_matrix_from_json(doc));
  }
}

TEST_CASE("malformed density matrix documents") {
  nlohmann::json doc = matrix_to_json(bell_state().matrix());
  auto bad = doc;
  bad["data"].erase(bad["data"].begin());
  CHECK_THROWS_AS(matrix_from_json(bad), InputError);
  bad = doc;
  bad["basis"][0] = "VV";
  CHECK_THROWS_AS(matrix_from_json(bad), InputError);
  bad = doc;
  bad["data"][0] = "x";
  CHECK_THROWS_AS(matrix_from_json(bad), InputError);
  bad = doc;
  bad["data"][0] = {2.0, 0.0};  // trace 1.5
  CHECK_NOTHROW(matrix_from_json(bad));
  CHECK_THROWS_AS(density_matrix_from_json(bad), InputError);
  CHECK_THROWS_AS(matrix_from_json(nlohmann::json::array()), InputError);
}

TEST_CASE("counts csv round trip") {
  CountRecords rec = {{"HH", 10, std::nullopt}, {"HV", 0, std::nullopt}, {"DR", 123456789, std::nullopt}};
  std::ostringstream out;
  write_counts_csv(out, rec, {"abc", 7});
  const std::string text = out.str();
  CHECK(text.find("# config_hash=abc") != std::string::npos);
  CHECK(text.find("# seed=7") != std::string::npos);
  std::istringstream in(text);
  const CountRecords back = read_counts_csv(in);
  REQUIRE(back.size() == 3);
  for (std::size_t i = 0; i < 3; ++i) {
    CHECK(back[i].label == rec[i].label);
    CHECK(back[i].count == rec[i].count);
  }
  std::istringstream timed("label,count,duration_s\nHH,5,1.5\n\nVV,6,2\n");
  const CountRecords t = read_counts_csv(timed);
  REQUIRE(t.size() == 2);
  CHECK(*t[0].duration_s == doctest::Approx(1.5));
}

TEST_CASE("malformed counts") {
  const auto bad = [](const std::string& s) {
    std::istringstream in(s);
    return read_counts_csv(in);
  };
  CHECK_THROWS_AS(bad(""), InputError);
  CHECK_THROWS_AS(bad("HH,5\n"), InputError);                       // no header
  CHECK_THROWS_AS(bad("label,count\n"), InputError);                // no records
  CHECK_THROWS_AS(bad("label,count\nHH,-1\n"), InputError);         // negative
  CHECK_THROWS_AS(bad("label,count\nHH,1.5\n"), InputError);        // not an integer
  CHECK_THROWS_AS(bad("label,count\nHH,abc\n"), InputError);
  CHECK_THROWS_AS(bad("label,count\nHH,1\nHH,2\n"), InputError);    // duplicate
  CHECK_THROWS_AS(bad("label,count\nHH\n"), InputError);
  CHECK_THROWS_AS(bad("label,count,duration_s\nHH,1,-2\n"), InputError);
  CHECK_THROWS_AS(read_counts_file("/nonexistent/counts.csv"), InputError);
}

TEST_CASE("number formatting") {
  CHECK(fmt(0.5) == "0.5");
  CHECK(fmt(-0.0) == "0");
  CHECK(fmt(1.0 / 3) == "0.3333333333");
}

TEST_CASE("projector table") {
  const std::string t = projector_table(standard_set());
  CHECK(std::count(t.begin(), t.end(), '\n') == 17);
  CHECK(t.find("\nHH  (+1.000000+0.000000i") != std::string::npos);
}
