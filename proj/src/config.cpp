#include "spdc/config.hpp"

#include <array>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include <boost/algorithm/string.hpp>
#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <openssl/evp.h>

namespace spdc {

namespace {

namespace pt = boost::property_tree;

// Accepted keys per section. Anything else is rejected so that a typo does
// not silently fall back to a default.
const std::map<std::string, std::set<std::string>>& known_keys() {
  static const std::map<std::string, std::set<std::string>> keys = {
      {"crystal", {"length_mm", "lengths_mm", "cut_angle_deg", "beam_waist_mm", "position_grid"}},
      {"pump", {"coherence_time_fs", "wavelength_nm"}},
      {"angles", {"phi1_deg", "phi2_deg", "phi3_deg", "internal_deg", "external_cone_deg"}},
      {"compensation", {"length_mm", "orientation_deg"}},
      {"sellmeier", {"o", "e", "valid_min_um", "valid_max_um"}},
      {"reference_table",
       {"n_pump_o", "n_pump_e", "n_signal_o", "n_signal_e", "ng_pump_o", "ng_pump_e",
        "ng_signal_o", "ng_signal_e"}},
      {"spectrum", {"coincidence_width_nm", "idler_geometry"}},
      {"source", {"group_index_source", "state_p"}},
      {"tomography",
       {"optimizer", "max_restarts", "mean_count", "scale", "rel_tol", "max_evaluations",
        "probes", "steps_per_temperature", "cooling", "floor"}},
      {"simulation",
       {"events_per_setting", "background_rate", "scan_points", "scan_idler_deg", "p_values",
        "bell_p", "bell_thetas_deg", "bell_sigma_target", "theta_step_deg"}},
      {"interference", {"tau_half_span_fs", "tau_points"}},
  };
  return keys;
}

pt::ptree parse_tree(const std::string& text) {
  std::istringstream in(text);
  pt::ptree tree;
  try {
    pt::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    throw InputError("config: line " + std::to_string(e.line()) + ": " + e.message());
  }
  for (const auto& [section, body] : tree) {
    const auto it = known_keys().find(section);
    if (it == known_keys().end()) {
      if (body.empty() && !body.data().empty()) throw InputError("config: key '" + section + "' outside a section");
      throw InputError("config: unknown section [" + section + "]");
    }
    for (const auto& [key, value] : body) {
      if (!it->second.contains(key)) throw InputError("config: unknown key " + section + "." + key);
    }
  }
  return tree;
}

std::optional<std::string> raw(const pt::ptree& tree, const std::string& path) {
  const auto v = tree.get_optional<std::string>(path);
  if (!v) return std::nullopt;
  return boost::algorithm::trim_copy(*v);
}

double to_number(const std::string& s, const std::string& path) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    throw InputError("config: " + path + ": not a number: '" + s + "'");
  }
  if (used != s.size() || !std::isfinite(v)) {
    throw InputError("config: " + path + ": not a number: '" + s + "'");
  }
  return v;
}

std::optional<double> number(const pt::ptree& tree, const std::string& path) {
  const auto s = raw(tree, path);
  if (!s) return std::nullopt;
  return to_number(*s, path);
}

template <typename T>
void assign(const pt::ptree& tree, const std::string& path, T& target) {
  if (const auto v = number(tree, path)) {
    if constexpr (std::is_integral_v<T>) {
      if (*v != std::floor(*v)) throw InputError("config: " + path + ": expected an integer");
      target = static_cast<T>(*v);
    } else {
      target = *v;
    }
  }
}

std::optional<std::vector<double>> number_list(const pt::ptree& tree, const std::string& path) {
  const auto s = raw(tree, path);
  if (!s) return std::nullopt;
  std::vector<std::string> parts;
  boost::algorithm::split(parts, *s, boost::algorithm::is_any_of(","));
  std::vector<double> out;
  for (auto& p : parts) {
    boost::algorithm::trim(p);
    out.push_back(to_number(p, path));
  }
  return out;
}

void require(bool ok, const std::string& message) {
  if (!ok) throw InputError("config: " + message);
}

SellmeierCoefficients sellmeier(const std::vector<double>& v, const std::string& path) {
  require(v.size() == 4, path + ": expected 4 coefficients a, b, c, d");
  return {v[0], v[1], v[2], v[3]};
}

MaterialModel material_from_tree(const pt::ptree& tree, Length pump, double internal_deg) {
  const MaterialModel base = MaterialModel::bbo();
  SellmeierCoefficients o = base.ordinary();
  SellmeierCoefficients e = base.extraordinary();
  if (const auto v = number_list(tree, "sellmeier.o")) o = sellmeier(*v, "sellmeier.o");
  if (const auto v = number_list(tree, "sellmeier.e")) e = sellmeier(*v, "sellmeier.e");

  ReferenceTable table;
  assign(tree, "reference_table.n_pump_o", table.n_pump_o);
  assign(tree, "reference_table.n_pump_e", table.n_pump_e);
  assign(tree, "reference_table.n_signal_o", table.n_signal_o);
  assign(tree, "reference_table.n_signal_e", table.n_signal_e);
  assign(tree, "reference_table.ng_pump_o", table.ng_pump_o);
  assign(tree, "reference_table.ng_pump_e", table.ng_pump_e);
  assign(tree, "reference_table.ng_signal_o", table.ng_signal_o);
  assign(tree, "reference_table.ng_signal_e", table.ng_signal_e);
  for (double n : {table.n_pump_o, table.n_pump_e, table.n_signal_o, table.n_signal_e,
                   table.ng_pump_o, table.ng_pump_e, table.ng_signal_o, table.ng_signal_e}) {
    require(n > 1.0 && n < 3.0, "reference_table entries must lie in (1, 3)");
  }

  double vmin = base.valid_min().micrometers();
  double vmax = base.valid_max().micrometers();
  assign(tree, "sellmeier.valid_min_um", vmin);
  assign(tree, "sellmeier.valid_max_um", vmax);
  require(vmin > 0.0 && vmax > vmin, "sellmeier validity range must satisfy 0 < min < max");

  double cut = 0.0;
  if (const auto deg = number(tree, "crystal.cut_angle_deg")) {
    require(*deg > 0.0 && *deg < 90.0, "crystal.cut_angle_deg must lie in (0, 90)");
    cut = deg_to_rad(*deg);
  } else {
    try {
      cut = MaterialModel::phase_matching_cut(o, e, pump, deg_to_rad(internal_deg));
    } catch (const DomainError& err) {
      throw InputError(std::string("config: no phase-matching cut angle: ") + err.what());
    }
  }
  return MaterialModel(o, e, cut, table, base.pump_reference(), base.downconversion_reference(),
                       Length::um(vmin), Length::um(vmax));
}

}  // namespace

MaterialModel parse_material(const std::string& text) {
  const pt::ptree tree = parse_tree(text);
  return material_from_tree(tree, Length::nm(405), 1.8);
}

RunConfig parse_run_config(const std::string& text) {
  const pt::ptree tree = parse_tree(text);
  RunConfig rc;
  rc.text = text;
  rc.hash = sha256_hex(text);
  SourceConfig& s = rc.source;

  if (const auto x = number(tree, "pump.wavelength_nm")) {
    require(*x > 0.0, "pump.wavelength_nm must be > 0");
    s.pump_wavelength = Length::nm(*x);
  }
  if (const auto x = number(tree, "pump.coherence_time_fs")) s.coherence_time_s = *x * 1e-15;
  if (const auto x = number(tree, "crystal.length_mm")) s.crystal_length = Length::mm(*x);
  if (const auto x = number(tree, "crystal.beam_waist_mm")) s.beam_waist = Length::mm(*x);
  assign(tree, "crystal.position_grid", rc.position_grid);
  if (const auto list = number_list(tree, "crystal.lengths_mm")) {
    rc.crystal_lengths.clear();
    for (double mm : *list) {
      require(mm >= 0.0, "crystal.lengths_mm entries must be >= 0");
      rc.crystal_lengths.push_back(Length::mm(mm));
    }
  }
  assign(tree, "angles.phi1_deg", s.phi1_deg);
  assign(tree, "angles.phi2_deg", s.phi2_deg);
  assign(tree, "angles.phi3_deg", s.phi3_deg);
  assign(tree, "angles.internal_deg", s.internal_angle_deg);
  assign(tree, "angles.external_cone_deg", s.external_cone_deg);
  for (double a : {s.phi1_deg, s.phi2_deg, s.phi3_deg, s.internal_angle_deg}) {
    require(a >= 0.0 && a < 90.0, "angles must lie in [0, 90) degrees");
  }

  const bool has_comp_len = raw(tree, "compensation.length_mm").has_value();
  const bool has_comp_orient = raw(tree, "compensation.orientation_deg").has_value();
  if (has_comp_len || has_comp_orient) {
    Compensation c;
    if (const auto x = number(tree, "compensation.length_mm")) c.length = Length::mm(*x);
    if (const auto x = number(tree, "compensation.orientation_deg")) {
      if (*x == 0.0) {
        c.orientation = RetarderOrientation::compensating;
      } else if (*x == 90.0) {
        c.orientation = RetarderOrientation::enhancing;
      } else {
        throw InputError("config: compensation.orientation_deg must be 0 or 90");
      }
    }
    s.compensation = c;
  }

  if (const auto x = number(tree, "spectrum.coincidence_width_nm")) s.coincidence_width = Length::nm(*x);
  if (const auto g = raw(tree, "spectrum.idler_geometry")) {
    if (*g == "transverse_matched") {
      s.idler_geometry = IdlerGeometry::transverse_matched;
    } else if (*g == "fixed_reference") {
      s.idler_geometry = IdlerGeometry::fixed_reference;
    } else {
      throw InputError("config: spectrum.idler_geometry must be transverse_matched or fixed_reference");
    }
  }
  if (const auto g = raw(tree, "source.group_index_source")) {
    if (*g == "reference_table") {
      s.group_index_source = GroupIndexSource::reference_table;
    } else if (*g == "sellmeier") {
      s.group_index_source = GroupIndexSource::sellmeier;
    } else {
      throw InputError("config: source.group_index_source must be reference_table or sellmeier");
    }
  }
  if (const auto x = number(tree, "source.state_p")) {
    require(*x >= 0.0 && *x <= 1.0, "source.state_p must lie in [0, 1]");
    rc.state_p = *x;
  }

  s.material = material_from_tree(tree, s.pump_wavelength, s.internal_angle_deg);
  s.validate();
  require(rc.position_grid >= 32, "crystal.position_grid must be >= 32");

  // Tomography.
  auto& mle = rc.tomography.mle;
  if (const auto o = raw(tree, "tomography.optimizer")) {
    if (*o == "simplex") {
      mle.optimizer = Optimizer::simplex;
    } else if (*o == "annealing") {
      mle.optimizer = Optimizer::annealing;
    } else {
      throw InputError("config: tomography.optimizer must be simplex or annealing");
    }
  }
  assign(tree, "tomography.max_restarts", mle.max_restarts);
  assign(tree, "tomography.mean_count", rc.tomography.mean_count);
  assign(tree, "tomography.scale", mle.simplex.scale);
  assign(tree, "tomography.rel_tol", mle.simplex.rel_tol);
  assign(tree, "tomography.max_evaluations", mle.simplex.max_evaluations);
  assign(tree, "tomography.probes", mle.annealing.probes);
  assign(tree, "tomography.steps_per_temperature", mle.annealing.steps_per_temperature);
  assign(tree, "tomography.cooling", mle.annealing.cooling);
  assign(tree, "tomography.floor", mle.annealing.floor_ratio);
  require(mle.max_restarts >= 0, "tomography.max_restarts must be >= 0");
  require(rc.tomography.mean_count > 0.0, "tomography.mean_count must be > 0");
  require(mle.simplex.scale > 0.0, "tomography.scale must be > 0");
  require(mle.simplex.rel_tol > 0.0, "tomography.rel_tol must be > 0");
  require(mle.annealing.cooling > 0.0 && mle.annealing.cooling < 1.0,
          "tomography.cooling must lie in (0, 1)");

  // Simulation.
  auto& sim = rc.simulation;
  assign(tree, "simulation.events_per_setting", sim.events_per_setting);
  assign(tree, "simulation.background_rate", sim.background_rate);
  assign(tree, "simulation.scan_points", sim.scan_points);
  assign(tree, "simulation.scan_idler_deg", sim.scan_idler_deg);
  assign(tree, "simulation.bell_p", sim.bell_p);
  assign(tree, "simulation.bell_sigma_target", sim.bell_sigma_target);
  assign(tree, "simulation.theta_step_deg", sim.theta_step_deg);
  if (const auto l = number_list(tree, "simulation.p_values")) sim.p_values = *l;
  if (const auto l = number_list(tree, "simulation.bell_thetas_deg")) sim.bell_thetas_deg = *l;
  require(sim.events_per_setting > 0.0, "simulation.events_per_setting must be > 0");
  require(sim.background_rate >= 0.0, "simulation.background_rate must be >= 0");
  require(sim.scan_points >= 3, "simulation.scan_points must be >= 3");
  require(sim.bell_sigma_target > 0.0, "simulation.bell_sigma_target must be > 0");
  require(sim.theta_step_deg > 0.0, "simulation.theta_step_deg must be > 0");
  for (double p : sim.p_values) require(p >= 0.0 && p <= 1.0, "simulation.p_values must lie in [0, 1]");
  require(sim.bell_p >= 0.0 && sim.bell_p <= 1.0, "simulation.bell_p must lie in [0, 1]");

  // Interference.
  if (const auto x = number(tree, "interference.tau_half_span_fs")) {
    require(*x > 0.0, "interference.tau_half_span_fs must be > 0");
    rc.interference.tau_half_span_s = *x * 1e-15;
  }
  assign(tree, "interference.tau_points", rc.interference.tau_points);
  require(rc.interference.tau_points >= 2, "interference.tau_points must be >= 2");

  return rc;
}

RunConfig load_run_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open config file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_run_config(buf.str());
}

std::string sha256_hex(std::string_view data) {
  std::array<unsigned char, EVP_MAX_MD_SIZE> md{};
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), md.data(), &len, EVP_sha256(), nullptr) != 1) {
    throw std::runtime_error("sha256 failed");
  }
  static constexpr char hex[] = "0123456789abcdef";
  std::string out;
  out.reserve(2 * len);
  for (unsigned int i = 0; i < len; ++i) {
    out.push_back(hex[md[i] >> 4]);
    out.push_back(hex[md[i] & 0xf]);
  }
  return out;
}

}  // namespace spdc
