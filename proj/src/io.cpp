#include "lingd/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "lingd/error.hpp"
#include "lingd/version.hpp"

namespace lingd {

std::string format_double(double v, int precision) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, precision);
  return std::string(buf, res.ptr);
}

namespace {

std::string format_fixed(double v, int decimals) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::fixed, decimals);
  return std::string(buf, res.ptr);
}

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> cells;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    cells.push_back(trim(std::string_view(line).substr(start, comma - start)));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return cells;
}

std::ofstream open_out(const std::string& path) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw Error(ErrorCode::Io, "cannot open '" + path + "' for writing");
  return os;
}

std::ifstream open_in(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw Error(ErrorCode::Io, "cannot open '" + path + "'");
  return is;
}

}  // namespace

void write_csv(std::ostream& os, const Dataset& data) {
  const auto& names = data.names();
  for (std::size_t i = 0; i < names.size(); ++i) os << (i ? "," : "") << names[i];
  os << '\n';
  const Eigen::MatrixXd& v = data.values();
  std::string line;
  for (Eigen::Index t = 0; t < v.cols(); ++t) {
    line.clear();
    for (Eigen::Index i = 0; i < v.rows(); ++i) {
      if (i) line += ',';
      line += format_double(v(i, t));
    }
    line += '\n';
    os << line;
  }
}

void write_csv_file(const std::string& path, const Dataset& data) {
  auto os = open_out(path);
  write_csv(os, data);
  if (!os) throw Error(ErrorCode::Io, "failed writing '" + path + "'");
}

Dataset read_csv(std::istream& is) {
  std::string line;
  std::size_t line_no = 0;
  std::vector<std::string> names;
  while (std::getline(is, line)) {
    ++line_no;
    if (!trim(line).empty()) {
      names = split(line);
      break;
    }
  }
  if (names.empty()) throw Error(ErrorCode::ParseError, "CSV has no header line");
  for (const auto& n : names) {
    if (n.empty()) throw Error(ErrorCode::ParseError, "line " + std::to_string(line_no) + ": empty column name");
  }

  std::vector<double> flat;
  std::size_t rows = 0;
  while (std::getline(is, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const auto cells = split(line);
    if (cells.size() != names.size()) {
      throw Error(ErrorCode::ParseError, "line " + std::to_string(line_no) + ": expected " +
                                             std::to_string(names.size()) + " fields, found " +
                                             std::to_string(cells.size()));
    }
    for (std::size_t c = 0; c < cells.size(); ++c) {
      const std::string& cell = cells[c];
      double v = 0.0;
      const char* first = cell.data();
      if (!cell.empty() && cell.front() == '+') ++first;
      const auto res = std::from_chars(first, cell.data() + cell.size(), v);
      if (cell.empty() || res.ec != std::errc() || res.ptr != cell.data() + cell.size() ||
          !std::isfinite(v)) {
        throw Error(ErrorCode::ParseError, "line " + std::to_string(line_no) + ", column " +
                                               std::to_string(c + 1) + ": '" + cell +
                                               "' is not a finite number");
      }
      flat.push_back(v);
    }
    ++rows;
  }
  const auto n = static_cast<Eigen::Index>(names.size());
  Eigen::MatrixXd values(n, static_cast<Eigen::Index>(rows));
  for (std::size_t t = 0; t < rows; ++t)
    for (Eigen::Index i = 0; i < n; ++i)
      values(i, static_cast<Eigen::Index>(t)) = flat[t * names.size() + static_cast<std::size_t>(i)];
  try {
    return Dataset(std::move(values), std::move(names));
  } catch (const Error& e) {
    throw Error(ErrorCode::ParseError, e.what());
  }
}

Dataset read_csv_file(const std::string& path) {
  auto is = open_in(path);
  return read_csv(is);
}

json matrix_to_json(const Eigen::MatrixXd& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

Eigen::MatrixXd matrix_from_json(const json& j, const std::string& field) {
  if (!j.is_array() || j.empty()) {
    throw Error(ErrorCode::SchemaMismatch, field + " must be a non-empty array of rows");
  }
  const auto n = static_cast<Eigen::Index>(j.size());
  Eigen::MatrixXd m(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const json& row = j[static_cast<std::size_t>(i)];
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != n) {
      throw Error(ErrorCode::SchemaMismatch,
                  field + "[" + std::to_string(i) + "] must have " + std::to_string(n) + " entries");
    }
    for (Eigen::Index k = 0; k < n; ++k) {
      const json& v = row[static_cast<std::size_t>(k)];
      if (!v.is_number()) {
        throw Error(ErrorCode::SchemaMismatch,
                    field + "[" + std::to_string(i) + "][" + std::to_string(k) + "] is not a number");
      }
      m(i, k) = v.get<double>();
    }
  }
  return m;
}

namespace {

void check_schema_version(const json& j, const std::string& what) {
  if (!j.is_object()) throw Error(ErrorCode::SchemaMismatch, what + " must be a JSON object");
  if (j.contains("schema_version") && j["schema_version"] != kSchemaVersion) {
    throw Error(ErrorCode::SchemaMismatch, what + " has unsupported schema_version " +
                                               j["schema_version"].dump());
  }
}

}  // namespace

LoadedModel model_from_json(const json& j) {
  check_schema_version(j, "model");
  std::optional<Eigen::MatrixXd> b_dyn;
  Eigen::MatrixXd b;
  Eigen::VectorXd gain;
  if (j.contains("B_dyn")) {
    b_dyn = matrix_from_json(j["B_dyn"], "B_dyn");
  } else if (j.contains("B")) {
    b = matrix_from_json(j["B"], "B");
  } else {
    throw Error(ErrorCode::SchemaMismatch, "model needs a \"B\" or \"B_dyn\" matrix");
  }
  const Eigen::Index n = b_dyn ? b_dyn->rows() : b.rows();

  std::vector<std::string> names;
  if (j.contains("variables")) {
    if (!j["variables"].is_array() || static_cast<Eigen::Index>(j["variables"].size()) != n) {
      throw Error(ErrorCode::SchemaMismatch, "variables must list " + std::to_string(n) + " names");
    }
    for (const auto& v : j["variables"]) {
      if (!v.is_string()) throw Error(ErrorCode::SchemaMismatch, "variable names must be strings");
      names.push_back(v.get<std::string>());
    }
  } else {
    names = default_names(n);
  }

  if (b_dyn) {
    for (Eigen::Index a = 0; a < n; ++a) {
      if (std::abs(1.0 - (*b_dyn)(a, a)) < kUnitSelfLoopTolerance) {
        throw Error(ErrorCode::UnitSelfLoop, "B_dyn[" + std::to_string(a) + "][" + std::to_string(a) +
                                                 "]: variable '" + names[static_cast<std::size_t>(a)] +
                                                 "' has a self-loop with coefficient 1");
      }
    }
    auto removed = remove_self_loops(*b_dyn);
    b = removed.b.matrix();
    gain = removed.error_scales;
  }

  std::vector<ErrorTerm> terms(static_cast<std::size_t>(n));
  if (j.contains("errors")) {
    const json& errs = j["errors"];
    if (!errs.is_array() || static_cast<Eigen::Index>(errs.size()) != n) {
      throw Error(ErrorCode::SchemaMismatch, "errors must list " + std::to_string(n) + " entries");
    }
    for (std::size_t i = 0; i < errs.size(); ++i) {
      const std::string at = "errors[" + std::to_string(i) + "]";
      if (!errs[i].is_object()) throw Error(ErrorCode::SchemaMismatch, at + " must be an object");
      if (errs[i].contains("dist")) {
        if (!errs[i]["dist"].is_string()) throw Error(ErrorCode::SchemaMismatch, at + ".dist must be a string");
        terms[i].dist = parse_distribution(errs[i]["dist"].get<std::string>());
      }
      if (errs[i].contains("scale")) {
        if (!errs[i]["scale"].is_number()) throw Error(ErrorCode::SchemaMismatch, at + ".scale must be a number");
        terms[i].scale = errs[i]["scale"].get<double>();
      }
    }
  }

  return LoadedModel{std::move(names), StructuralModel{validate(b), ErrorSpec(std::move(terms)), gain},
                     std::move(b_dyn)};
}

LoadedModel read_model_file(const std::string& path) {
  const json j = read_json_file(path);
  try {
    return model_from_json(j);
  } catch (const Error& e) {
    throw Error(e.code(), path + ": " + e.what());
  }
}

json model_to_json(const LoadedModel& m) {
  json j;
  j["schema_version"] = kSchemaVersion;
  j["variables"] = m.names;
  j["B"] = matrix_to_json(m.model.b.matrix());
  if (m.b_dyn) j["B_dyn"] = matrix_to_json(*m.b_dyn);
  json errs = json::array();
  for (const auto& t : m.model.errors.terms()) {
    errs.push_back({{"dist", std::string(to_string(t.dist))}, {"scale", t.scale}});
  }
  j["errors"] = std::move(errs);
  return j;
}

json to_json(const CandidateModel& c) {
  json j;
  j["permutation"] = c.permutation.mapping();
  j["B"] = matrix_to_json(c.b.matrix());
  j["error_scale"] = json::array();
  for (Eigen::Index i = 0; i < c.diagonal.size(); ++i) j["error_scale"].push_back(1.0 / c.diagonal(i));
  json cycles = json::array();
  for (const auto& cy : c.cycles) {
    cycles.push_back({{"vertices", cy.vertices}, {"product", cy.product}});
  }
  j["cycles"] = std::move(cycles);
  j["disjoint_cycles"] = c.disjoint_cycles;
  j["spectral_radius"] = c.spectral_radius;
  j["stable"] = c.stable;
  j["marginal"] = c.marginal;
  return j;
}

json to_json(const EquivalenceClass& ec) {
  json j;
  j["schema_version"] = kSchemaVersion;
  j["tool"] = "lingd";
  j["version"] = kVersion;
  j["variables"] = ec.names;
  j["population_mode"] = ec.population_mode;
  j["prune"] = to_string(ec.prune);
  j["search"] = to_string(ec.search);
  j["ica"] = {{"converged", ec.ica_converged}, {"iterations", ec.ica_iterations}};
  j["w_ica"] = matrix_to_json(ec.w_ica);
  json pattern = json::array();
  for (Eigen::Index i = 0; i < ec.pattern.size(); ++i) {
    json row = json::array();
    for (Eigen::Index k = 0; k < ec.pattern.size(); ++k) row.push_back(ec.pattern(i, k));
    pattern.push_back(std::move(row));
  }
  j["pattern"] = std::move(pattern);
  const StabilityReport report = stability_filter(ec);
  j["stability"] = {{"stable_count", report.stable.size()},
                    {"unstable_count", report.unstable_count},
                    {"marginal_count", report.marginal_count},
                    {"uniqueness_guaranteed", report.uniqueness_guaranteed}};
  json cands = json::array();
  for (const auto& c : ec.candidates) cands.push_back(to_json(c));
  j["candidates"] = std::move(cands);
  return j;
}

std::vector<CandidateRecord> candidates_from_json(const json& j) {
  check_schema_version(j, "candidate set");
  if (!j.contains("candidates") || !j["candidates"].is_array()) {
    throw Error(ErrorCode::SchemaMismatch, "candidate set needs a \"candidates\" array");
  }
  std::vector<CandidateRecord> out;
  for (std::size_t k = 0; k < j["candidates"].size(); ++k) {
    const json& c = j["candidates"][k];
    const std::string at = "candidates[" + std::to_string(k) + "]";
    if (!c.is_object() || !c.contains("B")) throw Error(ErrorCode::SchemaMismatch, at + " has no B");
    CandidateRecord r;
    r.b = matrix_from_json(c["B"], at + ".B");
    r.stable = c.contains("stable") && c["stable"].is_boolean() && c["stable"].get<bool>();
    out.push_back(std::move(r));
  }
  return out;
}

json bootstrap_to_json(const BootstrapPruneResult& r) {
  json j;
  j["schema_version"] = kSchemaVersion;
  j["n_boot"] = r.replicates.size();
  j["alpha"] = r.alpha;
  j["reference"] = matrix_to_json(r.reference.w);
  j["lower"] = matrix_to_json(r.lower);
  j["upper"] = matrix_to_json(r.upper);
  j["zero_probability"] = matrix_to_json(r.zero_probability);
  return j;
}

json provenance_json(const LoadedModel& m, Eigen::Index n_samples, std::uint64_t seed) {
  json j;
  j["schema_version"] = kSchemaVersion;
  j["tool"] = "lingd";
  j["version"] = kVersion;
  j["seed"] = seed;
  j["n_samples"] = n_samples;
  j["model"] = model_to_json(m);
  if (m.model.error_gain.size() != 0) {
    j["error_gain"] = std::vector<double>(m.model.error_gain.data(),
                                          m.model.error_gain.data() + m.model.error_gain.size());
  }
  return j;
}

json to_json(const AnalysisReport& r) {
  json j;
  j["schema_version"] = kSchemaVersion;
  json cands = json::array();
  for (const auto& c : r.candidates) {
    cands.push_back({{"structural_distance", c.structural_distance},
                     {"max_coefficient_error", c.max_coefficient_error},
                     {"stable", c.stable}});
  }
  j["candidates"] = std::move(cands);
  j["best"] = r.best;
  j["best_structural_distance"] = r.candidates.at(r.best).structural_distance;
  j["best_max_coefficient_error"] = r.candidates.at(r.best).max_coefficient_error;
  j["stability_selected_truth"] = r.stability_selected_truth;
  j["stable_set_contains_truth"] = r.stable_set_contains_truth;
  return j;
}

namespace {

std::string quoted(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out + "\"";
}

}  // namespace

std::string to_dot(const CandidateModel& c, const std::vector<std::string>& names,
                   const std::string& graph_name) {
  const Eigen::MatrixXd& b = c.b.matrix();
  std::ostringstream os;
  os << "digraph " << quoted(graph_name) << " {\n";
  os << "  label=" << quoted("spectral radius " + format_fixed(c.spectral_radius, 4) +
                             (c.stable ? " (stable)" : " (unstable)"))
     << ";\n";
  if (!c.stable) os << "  edge [style=dashed];\n  node [style=dashed];\n";
  for (const auto& n : names) os << "  " << quoted(n) << ";\n";
  for (Eigen::Index to = 0; to < b.rows(); ++to) {
    for (Eigen::Index from = 0; from < b.cols(); ++from) {
      if (b(to, from) == 0.0) continue;
      os << "  " << quoted(names[static_cast<std::size_t>(from)]) << " -> "
         << quoted(names[static_cast<std::size_t>(to)]) << " [label="
         << quoted(format_fixed(b(to, from), 4)) << "];\n";
    }
  }
  os << "}\n";
  return os.str();
}

std::string summary(const EquivalenceClass& ec) {
  const StabilityReport report = stability_filter(ec);
  std::ostringstream os;
  os << "candidates: " << ec.candidates.size() << " (prune=" << to_string(ec.prune)
     << ", search=" << to_string(ec.search) << (ec.population_mode ? ", population mode" : "")
     << ")\n";
  if (!ec.population_mode && !ec.ica_converged) os << "warning: ICA did not converge\n";
  for (std::size_t k = 0; k < ec.candidates.size(); ++k) {
    const auto& c = ec.candidates[k];
    os << "\ncandidate #" << (k + 1) << ": spectral radius " << format_fixed(c.spectral_radius, 4)
       << (c.stable ? " stable" : (c.marginal ? " marginal (treated as unstable)" : " unstable"))
       << "\n  permutation:";
    for (int r : c.permutation.mapping()) os << ' ' << r + 1;
    os << "\n  edges:\n";
    const Eigen::MatrixXd& b = c.b.matrix();
    for (Eigen::Index to = 0; to < b.rows(); ++to)
      for (Eigen::Index from = 0; from < b.cols(); ++from)
        if (b(to, from) != 0.0)
          os << "    " << ec.names[static_cast<std::size_t>(from)] << " -> "
             << ec.names[static_cast<std::size_t>(to)] << "  " << format_fixed(b(to, from), 4) << '\n';
    os << "  cycles:";
    if (c.cycles.empty()) os << " none";
    os << '\n';
    for (const auto& cy : c.cycles) {
      os << "    ";
      for (auto v : cy.vertices) os << ec.names[static_cast<std::size_t>(v)] << " -> ";
      os << ec.names[static_cast<std::size_t>(cy.vertices.front())] << "  product "
         << format_fixed(cy.product, 4) << '\n';
    }
  }
  os << "\nstability filter: " << report.stable.size() << " stable of " << ec.candidates.size();
  if (report.stable.size() == 1 && report.uniqueness_guaranteed) {
    os << " (disjoint cycles: the stable candidate is unique)";
  } else if (report.stable.size() > 1) {
    os << " (several stable candidates; cannot single one out)";
  }
  os << '\n';
  return os.str();
}

std::string summary(const AnalysisReport& r) {
  std::ostringstream os;
  for (std::size_t k = 0; k < r.candidates.size(); ++k) {
    const auto& c = r.candidates[k];
    os << "candidate #" << (k + 1) << ": structural distance " << c.structural_distance
       << ", max coefficient error " << format_double(c.max_coefficient_error, 6)
       << (c.stable ? ", stable" : ", unstable") << '\n';
  }
  os << "best match: candidate #" << (r.best + 1) << '\n';
  os << "stability filter selected the truth: " << (r.stability_selected_truth ? "yes" : "no") << '\n';
  return os.str();
}

void write_text_file(const std::string& path, const std::string& contents) {
  auto os = open_out(path);
  os << contents;
  if (!os) throw Error(ErrorCode::Io, "failed writing '" + path + "'");
}

json read_json_file(const std::string& path) {
  auto is = open_in(path);
  try {
    return json::parse(is);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::ParseError, path + ": " + e.what());
  }
}

}  // namespace lingd
