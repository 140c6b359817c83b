#include "spdc/io.hpp"

#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <set>
#include <sstream>

#include <boost/algorithm/string.hpp>

namespace spdc {

using nlohmann::json;

json matrix_to_json(const Matrix4c& m) {
  json data = json::array();
  for (int r = 0; r < 4; ++r) {
    for (int c = 0; c < 4; ++c) data.push_back({m(r, c).real(), m(r, c).imag()});
  }
  json basis = json::array();
  for (const auto& l : kBasisLabels) basis.push_back(l);
  return {{"basis", basis}, {"rows", 4}, {"cols", 4}, {"data", data}};
}

Matrix4c matrix_from_json(const json& doc) {
  try {
    if (doc.contains("basis")) {
      const auto& b = doc.at("basis");
      bool ok = b.is_array() && b.size() == 4;
      for (std::size_t i = 0; ok && i < 4; ++i) ok = b[i] == kBasisLabels[i];
      if (!ok) throw InputError("density matrix: basis must be [HH, HV, VH, VV]");
    }
    const auto& data = doc.at("data");
    if (!data.is_array() || data.size() != 16) {
      throw InputError("density matrix: 'data' must hold 16 [re, im] pairs");
    }
    Matrix4c m;
    for (std::size_t k = 0; k < 16; ++k) {
      const auto& e = data[k];
      if (!e.is_array() || e.size() != 2 || !e[0].is_number() || !e[1].is_number()) {
        throw InputError("density matrix: entry " + std::to_string(k) + " is not [re, im]");
      }
      m(static_cast<int>(k / 4), static_cast<int>(k % 4)) =
          Complex(e[0].get<double>(), e[1].get<double>());
    }
    return m;
  } catch (const json::exception& e) {
    throw InputError(std::string("density matrix: ") + e.what());
  }
}

DensityMatrix4 density_matrix_from_json(const json& doc) {
  const Matrix4c m = matrix_from_json(doc);
  if (const auto why = DensityMatrix4::check(m)) throw InputError("density matrix: " + *why);
  return DensityMatrix4(m);
}

json diagnostics_to_json(const MleDiagnostics& d) {
  return {{"final_log_likelihood", d.final_log_likelihood},
          {"iterations", d.iterations},
          {"optimizer", to_string(d.optimizer)},
          {"restarts", d.restarts},
          {"trace_from_search", d.trace_from_search},
          {"trace_before_normalization", d.trace_before_normalization},
          {"seed", d.seed}};
}

namespace {

std::uint64_t parse_count(const std::string& s, int line) {
  const std::string where = "counts line " + std::to_string(line) + ": ";
  if (s.empty() || s.find_first_not_of("0123456789") != std::string::npos) {
    throw InputError(where + "count must be a nonnegative integer, got '" + s + "'");
  }
  try {
    return std::stoull(s);
  } catch (const std::exception&) {
    throw InputError(where + "count out of range");
  }
}

}  // namespace

CountRecords read_counts_csv(std::istream& in) {
  CountRecords out;
  std::set<std::string> seen;
  std::string line;
  int number = 0;
  bool header = false;
  bool with_duration = false;
  while (std::getline(in, line)) {
    ++number;
    boost::algorithm::trim(line);
    if (line.empty() || line.front() == '#') continue;
    std::vector<std::string> cols;
    boost::algorithm::split(cols, line, boost::algorithm::is_any_of(","));
    for (auto& c : cols) boost::algorithm::trim(c);
    if (!header) {
      if (cols.size() < 2 || cols[0] != "label" || cols[1] != "count" || cols.size() > 3 ||
          (cols.size() == 3 && cols[2] != "duration_s")) {
        throw InputError("counts: header must be 'label,count' or 'label,count,duration_s'");
      }
      with_duration = cols.size() == 3;
      header = true;
      continue;
    }
    if (cols.size() != (with_duration ? 3u : 2u)) {
      throw InputError("counts line " + std::to_string(number) + ": wrong number of columns");
    }
    CountRecord r;
    r.label = cols[0];
    if (r.label.empty()) throw InputError("counts line " + std::to_string(number) + ": empty label");
    if (!seen.insert(r.label).second) throw InputError("counts: duplicate label " + r.label);
    r.count = parse_count(cols[1], number);
    if (with_duration && !cols[2].empty()) {
      std::size_t used = 0;
      double d = -1.0;
      try {
        d = std::stod(cols[2], &used);
      } catch (const std::exception&) {
        used = 0;
      }
      if (used != cols[2].size() || !(d > 0.0)) {
        throw InputError("counts line " + std::to_string(number) + ": bad duration");
      }
      r.duration_s = d;
    }
    out.push_back(std::move(r));
  }
  if (!header) throw InputError("counts: missing header");
  if (out.empty()) throw InputError("counts: no records");
  return out;
}

CountRecords read_counts_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open counts file: " + path);
  return read_counts_csv(in);
}

void write_csv_preamble(std::ostream& out, const Provenance& prov,
                        const std::vector<std::string>& columns) {
  out << "# config_hash=" << prov.config_hash << "\n# seed=" << prov.seed << '\n';
  out << boost::algorithm::join(columns, ",") << '\n';
}

void write_counts_csv(std::ostream& out, const CountRecords& records, const Provenance& prov) {
  bool durations = false;
  for (const auto& r : records) durations = durations || r.duration_s.has_value();
  write_csv_preamble(out, prov, durations ? std::vector<std::string>{"label", "count", "duration_s"}
                                          : std::vector<std::string>{"label", "count"});
  for (const auto& r : records) {
    out << r.label << ',' << r.count;
    if (durations) out << ',' << (r.duration_s ? fmt(*r.duration_s) : "");
    out << '\n';
  }
}

std::string fmt(double v) {
  if (v == 0.0) v = 0.0;  // no "-0"
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

std::string projector_table(const std::vector<Projector>& set) {
  std::ostringstream out;
  auto amp = [](Complex c) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%+.6f%+.6fi", c.real() + 0.0, c.imag() + 0.0);
    return std::string(buf);
  };
  out << "# label  signal(h, v)  idler(h, v)\n";
  for (const auto& p : set) {
    out << p.label() << "  (" << amp(p.signal().h()) << ", " << amp(p.signal().v()) << ")  ("
        << amp(p.idler().h()) << ", " << amp(p.idler().v()) << ")\n";
  }
  return out.str();
}

}  // namespace spdc
