#pragma once

// File formats: dataset CSV, model JSON, candidate-set JSON, DOT graphs and
// the plain-text discovery summary.

#include <Eigen/Dense>

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "lingd/analysis.hpp"
#include "lingd/assembly.hpp"
#include "lingd/dataset.hpp"
#include "lingd/simulate.hpp"

namespace lingd {

using json = nlohmann::ordered_json;

// ---- CSV -----------------------------------------------------------------

/// Header `x1,...,xn` (or the dataset's names), one sample per line,
/// 17 significant digits, '.' as decimal point regardless of locale.
void write_csv(std::ostream& os, const Dataset& data);
void write_csv_file(const std::string& path, const Dataset& data);

/// Throws ParseError naming the offending line on ragged rows or
/// non-numeric cells.
Dataset read_csv(std::istream& is);
Dataset read_csv_file(const std::string& path);

// ---- model JSON ----------------------------------------------------------
//
// {
//   "schema_version": 1,
//   "variables": ["x1", ...],
//   "B": [[...], ...],            row i holds the equation for variable i
//   "B_dyn": [[...], ...],        optional; self-loops allowed, takes precedence
//   "errors": [{"dist": "signed-square-gaussian", "scale": 1.0}, ...]   optional
// }

struct LoadedModel {
  std::vector<std::string> names;
  StructuralModel model;
  std::optional<Eigen::MatrixXd> b_dyn;
};

LoadedModel model_from_json(const json& j);
LoadedModel read_model_file(const std::string& path);
json model_to_json(const LoadedModel& m);

// ---- results -------------------------------------------------------------

json matrix_to_json(const Eigen::MatrixXd& m);
Eigen::MatrixXd matrix_from_json(const json& j, const std::string& field);

json to_json(const CandidateModel& c);
json to_json(const EquivalenceClass& ec);
/// Candidates of a serialized equivalence class. Throws SchemaMismatch.
std::vector<CandidateRecord> candidates_from_json(const json& j);

json bootstrap_to_json(const BootstrapPruneResult& r);
json provenance_json(const LoadedModel& m, Eigen::Index n_samples, std::uint64_t seed);
json to_json(const AnalysisReport& r);

/// One digraph; edge labels are coefficients rounded to 4 decimals and
/// unstable candidates are drawn dashed.
std::string to_dot(const CandidateModel& c, const std::vector<std::string>& names,
                   const std::string& graph_name);

std::string summary(const EquivalenceClass& ec);
std::string summary(const AnalysisReport& r);

/// Locale-independent shortest round-trip formatting with 17 digits.
std::string format_double(double v, int precision = 17);

void write_text_file(const std::string& path, const std::string& contents);
json read_json_file(const std::string& path);

}  // namespace lingd
