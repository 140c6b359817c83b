// spdcsim: figure data for the two-crystal polarization-entangled source.
//
// Every command writes into <out>/<run-id>/ and stamps each file with the
// config hash and seed. Exit codes: 0 ok, 2 bad input, 3 numerical failure.

#include <chrono>
#include <cmath>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "spdc/bell_chsh.hpp"
#include "spdc/config.hpp"
#include "spdc/experiment_sim.hpp"
#include "spdc/interference.hpp"
#include "spdc/io.hpp"
#include "spdc/source_model.hpp"
#include "spdc/tomography.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace spdc;

namespace {

constexpr int kExitInput = 2;
constexpr int kExitNumerical = 3;

struct Context {
  RunConfig config;
  std::uint64_t seed = 1;
  fs::path dir;
  bool verbose = false;

  Provenance provenance() const { return {config.hash, seed}; }

  json stamp(const std::string& command) const {
    return {{"command", command}, {"config_hash", config.hash}, {"seed", seed}};
  }

  std::ofstream open(const std::string& name) const {
    const fs::path p = dir / name;
    std::ofstream out(p, std::ios::binary);
    if (!out) throw InputError("cannot write " + p.string());
    std::cout << p.string() << '\n';
    return out;
  }

  void write_json(const std::string& name, const json& doc) const { open(name) << doc.dump(2) << '\n'; }
};

std::string timestamp_id() {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y%m%dT%H%M%SZ", &tm);
  return buf;
}

fs::path make_run_dir(const fs::path& out, std::string run_id) {
  fs::path dir;
  if (run_id.empty()) {
    // Concurrent runs started in the same second get distinct suffixes.
    const std::string base = timestamp_id();
    dir = out / base;
    for (int k = 1; fs::exists(dir); ++k) dir = out / (base + "-" + std::to_string(k));
  } else {
    dir = out / run_id;
  }
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw InputError("cannot create output directory " + dir.string() + ": " + ec.message());
  return dir;
}

double fs_of(double seconds) { return seconds * 1e15; }

SourceConfig with_length(SourceConfig cfg, Length l) {
  cfg.crystal_length = l;
  return cfg;
}

// Per-curve seeds derived from the run seed so that curves are independent
// but the whole run is reproducible.
std::uint64_t sub_seed(std::uint64_t seed, std::size_t index) {
  return seed * 0x9E3779B97F4A7C15ull + index;
}

json report_row(const SourceConfig& cfg, int grid) {
  const DelayReport r = delay_report(cfg, grid);
  return {{"length_mm", cfg.crystal_length.millimeters()},
          {"tau_h_fs", fs_of(r.tau_h)},
          {"tau_v_fs", fs_of(r.tau_v)},
          {"delta_tau_fs", fs_of(r.delta_tau)},
          {"delta_tau_effective_fs", fs_of(r.delta_tau_effective)},
          {"p_mid", r.p_mid},
          {"p_z", r.p_z}};
}

void cmd_source_report(const Context& ctx) {
  const RunConfig& rc = ctx.config;
  json doc = ctx.stamp("source-report");
  doc["coherence_time_fs"] = fs_of(rc.source.coherence_time_s);
  doc["rows"] = json::array();
  for (Length l : rc.crystal_lengths) doc["rows"].push_back(report_row(with_length(rc.source, l), rc.position_grid));
  ctx.write_json("fig4_source_report.json", doc);

  // Pump retarder in front of the generator: none, 0 deg, 90 deg.
  SourceConfig bare = rc.source;
  const Compensation comp = bare.compensation.value_or(Compensation{});
  bare.compensation.reset();
  {
    auto out = ctx.open("fig5_compensation.csv");
    write_csv_preamble(out, ctx.provenance(),
                       {"generator_mm", "retarder_mm", "orientation_deg", "delta_tau_eff_fs", "p_mid", "p_z"});
    auto row = [&](const SourceConfig& c, const std::string& orient) {
      const DelayReport r = delay_report(c, rc.position_grid);
      out << fmt(c.crystal_length.millimeters()) << ','
          << (c.compensation ? fmt(c.compensation->length.millimeters()) : "0") << ',' << orient
          << ',' << fmt(fs_of(r.delta_tau_effective)) << ',' << fmt(r.p_mid) << ',' << fmt(r.p_z)
          << '\n';
    };
    row(bare, "none");
    for (auto [o, name] : {std::pair{RetarderOrientation::compensating, "0"},
                           std::pair{RetarderOrientation::enhancing, "90"}}) {
      SourceConfig c = bare;
      c.compensation = Compensation{comp.length, o};
      row(c, name);
    }
  }

  // p_mid against the position average over generator thickness.
  auto out = ctx.open("fig10_position_average.csv");
  write_csv_preamble(out, ctx.provenance(), {"length_mm", "p_mid", "p_z"});
  double max_mm = 3.0;
  for (Length l : rc.crystal_lengths) max_mm = std::max(max_mm, l.millimeters());
  const int steps = static_cast<int>(std::ceil(max_mm / 0.05));
  for (int i = 0; i <= steps; ++i) {
    const SourceConfig c = with_length(bare, Length::mm(0.05 * i));
    const DelayReport r = delay_report(c, rc.position_grid);
    out << fmt(c.crystal_length.millimeters()) << ',' << fmt(r.p_mid) << ',' << fmt(r.p_z) << '\n';
  }
}

// (label, p) pairs for the curves of the visibility scan and the tomography.
std::vector<std::pair<std::string, double>> state_list(const RunConfig& rc) {
  std::vector<std::pair<std::string, double>> out;
  if (rc.state_p) {
    out.emplace_back("", *rc.state_p);
    return out;
  }
  for (Length l : rc.crystal_lengths) {
    out.emplace_back(fmt(l.millimeters()), decoherence_parameter(with_length(rc.source, l)));
  }
  return out;
}

void cmd_visibility_scan(const Context& ctx) {
  const RunConfig& rc = ctx.config;
  const auto& sim = rc.simulation;
  const auto states = state_list(rc);

  auto curve = ctx.open("fig3_visibility.csv");
  write_csv_preamble(curve, ctx.provenance(), {"length_mm", "p", "xi_s_deg", "probability"});
  for (const auto& [label, p] : states) {
    const DensityMatrix4 rho = model_state(p);
    for (int deg = 0; deg <= 180; ++deg) {
      curve << label << ',' << fmt(p) << ',' << deg << ','
            << fmt(coincidence_probability(rho, deg, sim.scan_idler_deg)) << '\n';
    }
  }

  auto counts = ctx.open("fig3_visibility_counts.csv");
  write_csv_preamble(counts, ctx.provenance(), {"length_mm", "xi_s_deg", "counts"});
  json fits = json::array();
  for (std::size_t k = 0; k < states.size(); ++k) {
    const auto& [label, p] = states[k];
    AcquisitionPlan plan = visibility_scan_plan(sim.scan_points, sim.scan_idler_deg,
                                                sim.events_per_setting, sub_seed(ctx.seed, k));
    plan.background_rate = sim.background_rate;
    const CountRecords rec = simulate_counts(model_state(p), plan);
    std::vector<double> xi, n;
    for (std::size_t i = 0; i < rec.size(); ++i) {
      xi.push_back(plan.angles[i].first);
      n.push_back(static_cast<double>(rec[i].count));
      counts << label << ',' << fmt(xi.back()) << ',' << rec[i].count << '\n';
    }
    const VisibilityFit fit = fit_visibility(xi, n);
    fits.push_back({{"length_mm", label}, {"p_model", p}, {"visibility_fit", fit.visibility},
                    {"visibility_sigma", fit.sigma}, {"phase_deg", fit.phase_deg}});
  }
  json doc = ctx.stamp("visibility-scan");
  doc["events_per_setting"] = sim.events_per_setting;
  doc["idler_deg"] = sim.scan_idler_deg;
  doc["fits"] = fits;
  ctx.write_json("fig3_visibility_summary.json", doc);
}

void cmd_bell(const Context& ctx) {
  const auto& sim = ctx.config.simulation;
  auto curve = ctx.open("fig8_chsh.csv");
  write_csv_preamble(curve, ctx.provenance(), {"p", "theta_deg", "S"});
  const int steps = static_cast<int>(std::floor(90.0 / sim.theta_step_deg + 1e-9));
  std::vector<double> grid;
  for (int i = 0; i <= steps; ++i) grid.push_back(i * sim.theta_step_deg);
  for (double p : sim.p_values) {
    for (const auto& pt : chsh_scan(p, grid)) curve << fmt(p) << ',' << fmt(pt.theta_deg) << ',' << fmt(pt.s) << '\n';
  }

  // Simulated measurements; N0 is tuned on the 24 deg setting.
  const DensityMatrix4 rho = model_state(sim.bell_p);
  const double n0 = events_for_sigma_s(rho, 24.0, sim.bell_sigma_target);
  auto meas = ctx.open("fig9_chsh_measurements.csv");
  write_csv_preamble(meas, ctx.provenance(), {"p", "theta_deg", "S_model", "S", "S_err", "significance"});
  json rows = json::array();
  for (std::size_t k = 0; k < sim.bell_thetas_deg.size(); ++k) {
    const double theta = sim.bell_thetas_deg[k];
    const BellMeasurement m = bell_acquisition(rho, theta, n0, sub_seed(ctx.seed, k));
    const double model = chsh_S(rho, ChshSettings::theta_scheme(theta));
    const double sig = violation_significance(m.s, m.sigma_s);
    meas << fmt(sim.bell_p) << ',' << fmt(theta) << ',' << fmt(model) << ',' << fmt(m.s) << ','
         << fmt(m.sigma_s) << ',' << fmt(sig) << '\n';
    rows.push_back({{"theta_deg", theta}, {"S_model", model}, {"S", m.s}, {"S_err", m.sigma_s},
                    {"significance", sig}, {"E", m.correlations}});
  }
  json doc = ctx.stamp("bell");
  doc["p"] = sim.bell_p;
  doc["events_per_setting"] = n0;
  doc["measurements"] = rows;
  ctx.write_json("fig9_bell_summary.json", doc);
}

CountRecords simulated_tomography_counts(const Context& ctx, const DensityMatrix4& rho) {
  const auto set = standard_set();
  AcquisitionPlan plan =
      tomography_plan(events_for_mean_count(rho, set, ctx.config.tomography.mean_count), ctx.seed);
  plan.background_rate = ctx.config.simulation.background_rate;
  return simulate_counts(rho, plan);
}

double tomography_p(const RunConfig& rc) {
  return rc.state_p ? *rc.state_p : decoherence_parameter(rc.source);
}

void cmd_tomography(const Context& ctx, const std::string& counts_path) {
  const RunConfig& rc = ctx.config;
  const auto set = standard_set();
  json doc = ctx.stamp("tomography");
  CountRecords data;
  std::optional<DensityMatrix4> truth;
  if (counts_path.empty()) {
    const double p = tomography_p(rc);
    truth = model_state(p);
    data = simulated_tomography_counts(ctx, *truth);
    auto out = ctx.open("fig4_counts.csv");
    write_counts_csv(out, data, ctx.provenance());
    doc["source"] = {{"simulated", true}, {"p", p}, {"length_mm", rc.source.crystal_length.millimeters()}};
  } else {
    data = read_counts_file(counts_path);
    doc["source"] = {{"simulated", false}, {"counts_sha256", sha256_hex([&] {
                       std::ifstream in(counts_path, std::ios::binary);
                       std::ostringstream s;
                       s << in.rdbuf();
                       return s.str();
                     }())}};
  }
  ctx.open("projectors.txt") << projector_table(set);

  MleOptions opts = rc.tomography.mle;
  opts.seed = ctx.seed;
  const LinearInversion li = linear_inversion(data, set, dual_basis(set));
  const MleResult r = mle_reconstruct(data, set, opts);

  doc["basis"] = matrix_to_json(r.rho.matrix())["basis"];
  doc["rows"] = 4;
  doc["cols"] = 4;
  doc["data"] = matrix_to_json(r.rho.matrix())["data"];
  doc["visibility"] = visibility(r.rho);
  doc["purity"] = purity(r.rho);
  doc["linear_inversion"] = {{"physical", li.physical}, {"min_eigenvalue", li.min_eigenvalue}};
  if (truth) doc["frobenius_error"] = r.rho.frobenius_distance(*truth);
  ctx.write_json("fig4_density_matrix.json", doc);

  json diag = diagnostics_to_json(r.diagnostics);
  diag["config_hash"] = rc.hash;
  diag["command"] = "tomography";
  ctx.write_json("fig4_diagnostics.json", diag);
}

void cmd_interference(const Context& ctx) {
  const RunConfig& rc = ctx.config;
  std::vector<double> grid;
  try {
    grid = tau_grid(rc.interference.tau_half_span_s, rc.interference.tau_points);
  } catch (const DomainError& e) {
    throw InputError(e.what());
  }
  auto out = ctx.open("fig7_interference.csv");
  write_csv_preamble(out, ctx.provenance(), {"length_mm", "tau_fs", "single", "coincidence"});
  json rows = json::array();
  for (Length l : rc.crystal_lengths) {
    const SourceConfig cfg = with_length(rc.source, l);
    const Spectrum s1 = effective_spectrum(cfg, SpectrumMode::single);
    const Spectrum s2 = effective_spectrum(cfg, SpectrumMode::coincidence);
    const FringePattern f1 = fringe_pattern(s1, grid);
    const FringePattern f2 = fringe_pattern(s2, grid);
    double w1 = 0.0, w2 = 0.0;
    try {
      w1 = envelope_width(f1);
      w2 = envelope_width(f2);
    } catch (const DomainError& e) {
      // An undersampled or too short delay grid is a configuration problem.
      throw InputError(std::string("interference: ") + e.what());
    }
    for (std::size_t i = 0; i < grid.size(); ++i) {
      out << fmt(l.millimeters()) << ',' << fmt(fs_of(grid[i])) << ','
          << fmt(f1.probability[i] / f1.reference) << ',' << fmt(f2.probability[i] / f2.reference)
          << '\n';
    }
    rows.push_back({{"length_mm", l.millimeters()},
                    {"single_width_fs", fs_of(w1)},
                    {"coincidence_width_fs", fs_of(w2)},
                    {"single_spectrum_fwhm_nm", s1.fwhm_wavelength().nanometers()},
                    {"coincidence_spectrum_fwhm_nm", s2.fwhm_wavelength().nanometers()}});
  }
  json doc = ctx.stamp("interference");
  doc["width_convention"] = "FWHM of the fringe-visibility envelope";
  doc["rows"] = rows;
  ctx.write_json("fig7_summary.json", doc);
}

void cmd_simulate_counts(const Context& ctx, const std::string& mode, double theta) {
  const RunConfig& rc = ctx.config;
  const auto& sim = rc.simulation;
  if (mode == "tomography") {
    const CountRecords rec = simulated_tomography_counts(ctx, model_state(tomography_p(rc)));
    auto out = ctx.open("counts_tomography.csv");
    write_counts_csv(out, rec, ctx.provenance());
  } else if (mode == "visibility") {
    AcquisitionPlan plan = visibility_scan_plan(sim.scan_points, sim.scan_idler_deg,
                                                sim.events_per_setting, ctx.seed);
    plan.background_rate = sim.background_rate;
    const CountRecords rec = simulate_counts(model_state(tomography_p(rc)), plan);
    auto out = ctx.open("counts_visibility.csv");
    write_csv_preamble(out, ctx.provenance(), {"xi_s_deg", "counts"});
    for (std::size_t i = 0; i < rec.size(); ++i) out << fmt(plan.angles[i].first) << ',' << rec[i].count << '\n';
  } else {
    const DensityMatrix4 rho = model_state(sim.bell_p);
    const double n0 = events_for_sigma_s(rho, 24.0, sim.bell_sigma_target);
    const BellMeasurement m = bell_acquisition(rho, theta, n0, ctx.seed);
    auto out = ctx.open("counts_bell.csv");
    write_counts_csv(out, m.records, ctx.provenance());
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Figure data for a two-crystal polarization-entangled photon source"};
  app.require_subcommand(1);
  std::string config_path;
  std::uint64_t seed = 1;
  std::string out_dir = "out";
  std::string run_id;
  bool verbose = false;
  app.add_option("--config", config_path, "Configuration file (INI sections)")->check(CLI::ExistingFile);
  app.add_option("--seed", seed, "Random seed");
  app.add_option("--out", out_dir, "Output directory");
  app.add_option("--run-id", run_id, "Subdirectory name (default: UTC timestamp)");
  app.add_flag("-v,--verbose", verbose, "Print diagnostics to stderr");

  auto* source = app.add_subcommand("source-report", "Delays and decoherence parameter per crystal length");
  auto* scan = app.add_subcommand("visibility-scan", "Coincidence rate against the signal polarizer");
  auto* bell = app.add_subcommand("bell", "CHSH curves and simulated measurements");
  auto* tomo = app.add_subcommand("tomography", "Maximum-likelihood state reconstruction");
  std::string counts_path;
  tomo->add_option("--counts", counts_path, "Counts CSV (label,count); simulated when omitted")
      ->check(CLI::ExistingFile);
  auto* interf = app.add_subcommand("interference", "Single and coincidence fringe patterns");
  auto* simc = app.add_subcommand("simulate-counts", "Write a synthetic counts file");
  std::string mode = "tomography";
  double theta = 24.0;
  simc->add_option("--mode", mode, "tomography, visibility or bell")
      ->check(CLI::IsMember({"tomography", "visibility", "bell"}));
  simc->add_option("--theta", theta, "CHSH angle for --mode bell (deg)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitInput;
  }

  try {
    Context ctx;
    ctx.config = config_path.empty() ? parse_run_config("") : load_run_config(config_path);
    ctx.seed = seed;
    ctx.verbose = verbose;
    ctx.dir = make_run_dir(out_dir, run_id);
    if (verbose) std::cerr << "config sha256 " << ctx.config.hash << ", seed " << seed << '\n';

    if (*source) cmd_source_report(ctx);
    if (*scan) cmd_visibility_scan(ctx);
    if (*bell) cmd_bell(ctx);
    if (*tomo) cmd_tomography(ctx, counts_path);
    if (*interf) cmd_interference(ctx);
    if (*simc) cmd_simulate_counts(ctx, mode, theta);
  } catch (const InputError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInput;
  } catch (const ConvergenceError& e) {
    std::cerr << "error: " << e.what() << " (best log-likelihood "
              << e.best().diagnostics.final_log_likelihood << ")\n";
    return kExitNumerical;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitNumerical;
  }
  return 0;
}
