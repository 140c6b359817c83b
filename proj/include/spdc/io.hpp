#pragma once

// Text formats: density-matrix and diagnostics documents (JSON), counts and
// curve tables (CSV with '#' provenance lines).

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "json.hpp"

#include "spdc/polarization_state.hpp"
#include "spdc/projectors.hpp"
#include "spdc/tomography.hpp"

namespace spdc {

struct Provenance {
  std::string config_hash;
  std::uint64_t seed = 0;
};

// {"basis": ["HH","HV","VH","VV"], "rows": 4, "cols": 4,
//  "data": [[re, im], ...]} in row-major order. Doubles are written with
// shortest round-trip precision, so parse(dump(m)) == m exactly.
nlohmann::json matrix_to_json(const Matrix4c& m);
// Throws InputError on a malformed document.
Matrix4c matrix_from_json(const nlohmann::json& doc);
DensityMatrix4 density_matrix_from_json(const nlohmann::json& doc);

nlohmann::json diagnostics_to_json(const MleDiagnostics& d);

// "label,count[,duration_s]" with a header row; '#' lines are comments.
// Throws InputError on malformed rows, duplicate labels or negative counts.
CountRecords read_counts_csv(std::istream& in);
CountRecords read_counts_file(const std::string& path);
void write_counts_csv(std::ostream& out, const CountRecords& records, const Provenance& prov);

// Writes "# config_hash=...", "# seed=..." and the column header line.
void write_csv_preamble(std::ostream& out, const Provenance& prov,
                        const std::vector<std::string>& columns);
// Fixed "%.10g" so that files are stable across runs.
std::string fmt(double v);

// label  signal(h, v)  idler(h, v), one projector per line.
std::string projector_table(const std::vector<Projector>& set);

}  // namespace spdc
