#include "doctest.h"

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace fs = std::filesystem;

namespace {

const fs::path& work_dir() {
  static const fs::path dir = [] {
    fs::path d = fs::temp_directory_path() / ("spdcsim_cli_" + std::to_string(::getpid()));
    fs::remove_all(d);
    fs::create_directories(d);
    return d;
  }();
  return dir;
}

int run(const std::string& args) {
  const std::string cmd = std::string(SPDCSIM_PATH) + " --out " + (work_dir() / "out").string() +
                          " " + args + " > " + (work_dir() / "stdout.txt").string() + " 2> " +
                          (work_dir() / "stderr.txt").string();
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

fs::path write_file(const std::string& name, const std::string& text) {
  const fs::path p = work_dir() / name;
  std::ofstream(p) << text;
  return p;
}

fs::path run_dir(const std::string& id) { return work_dir() / "out" / id; }

}  // namespace

TEST_CASE("every command writes stamped files") {
  const struct {
    const char* args;
    const char* id;
    std::vector<const char*> files;
  } cases[] = {
      {"source-report", "src", {"fig4_source_report.json", "fig5_compensation.csv", "fig10_position_average.csv"}},
      {"visibility-scan", "vis", {"fig3_visibility.csv", "fig3_visibility_counts.csv", "fig3_visibility_summary.json"}},
      {"bell", "bell", {"fig8_chsh.csv", "fig9_chsh_measurements.csv", "fig9_bell_summary.json"}},
      {"tomography", "tomo", {"fig4_counts.csv", "fig4_density_matrix.json", "fig4_diagnostics.json"}},
      {"interference", "intf", {"fig7_interference.csv", "fig7_summary.json"}},
      {"simulate-counts --mode bell", "simc", {"counts_bell.csv"}},
  };
  for (const auto& c : cases) {
    CAPTURE(c.args);
    REQUIRE(run(std::string("--seed 11 --run-id ") + c.id + " " + c.args) == 0);
    for (const char* f : c.files) {
      CAPTURE(f);
      const std::string text = slurp(run_dir(c.id) / f);
      REQUIRE_FALSE(text.empty());
      if (fs::path(f).extension() == ".json") {
        const auto doc = nlohmann::json::parse(text);
        CHECK(doc.at("seed") == 11);
        CHECK(doc.contains("command"));
        CHECK(doc.at("config_hash").get<std::string>().size() == 64);
      } else {
        CHECK(text.rfind("# config_hash=", 0) == 0);
        CHECK(text.find("# seed=11\n") != std::string::npos);
      }
    }
  }
}

TEST_CASE("tomography reads a counts file") {
  REQUIRE(run("--seed 3 --run-id sim simulate-counts --mode tomography") == 0);
  const fs::path counts = run_dir("sim") / "counts_tomography.csv";
  REQUIRE(run("--run-id fromfile tomography --counts " + counts.string()) == 0);
  const auto doc = nlohmann::json::parse(slurp(run_dir("fromfile") / "fig4_density_matrix.json"));
  // Default source: 0.5 mm, p near 0.73.
  CHECK(doc.at("visibility").get<double>() == doctest::Approx(0.73).epsilon(0.05));
}

TEST_CASE("3 mm tomography gives a near-diagonal state") {
  const fs::path cfg = write_file("thick.ini", "[crystal]\nlength_mm = 3\n");
  REQUIRE(run("--config " + cfg.string() + " --run-id thick tomography") == 0);
  const auto doc = nlohmann::json::parse(slurp(run_dir("thick") / "fig4_density_matrix.json"));
  CHECK(doc.at("visibility").get<double>() < 0.2);
}

TEST_CASE("input errors exit with 2") {
  const fs::path bad_cfg = write_file("bad.ini", "[crystal]\nlenght_mm = 1\n");
  CHECK(run("--config " + bad_cfg.string() + " source-report") == 2);
  CHECK(slurp(work_dir() / "stderr.txt").find("lenght_mm") != std::string::npos);
  CHECK(run("--config /nonexistent.ini source-report") == 2);
  CHECK(run("no-such-command") == 2);
  CHECK(run("") == 2);
  const fs::path bad_counts = write_file("bad.csv", "label,count\nHH,12\nHV,x\n");
  CHECK(run("tomography --counts " + bad_counts.string()) == 2);
  const fs::path partial = write_file("partial.csv", "label,count\nHH,12\nHV,1\nVV,10\nVH,2\n");
  CHECK(run("tomography --counts " + partial.string()) == 2);
  const fs::path coarse = write_file("coarse.ini", "[interference]\ntau_points = 256\n");
  CHECK(run("--config " + coarse.string() + " interference") == 2);
  CHECK(run("--help") == 0);
}

TEST_CASE("non-convergence exits with 3") {
  const fs::path cfg = write_file("tight.ini", "[tomography]\nmax_evaluations = 30\nmax_restarts = 1\n");
  CHECK(run("--config " + cfg.string() + " --run-id tight tomography") == 3);
}

TEST_CASE("reference config spells out the defaults") {
  const std::string cfg = std::string(CONFIG_DIR) + "/reference.ini";
  REQUIRE(run("--config " + cfg + " --run-id ref source-report") == 0);
  REQUIRE(run("--run-id def source-report") == 0);
  auto a = nlohmann::json::parse(slurp(run_dir("ref") / "fig4_source_report.json"));
  auto b = nlohmann::json::parse(slurp(run_dir("def") / "fig4_source_report.json"));
  CHECK(a["config_hash"] != b["config_hash"]);
  a.erase("config_hash");
  b.erase("config_hash");
  CHECK(a == b);
  CHECK(run("--config " + std::string(CONFIG_DIR) + "/compensated.ini --run-id comp source-report") == 0);
}
