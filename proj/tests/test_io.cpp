#include "doctest.h"

#include <sstream>
#include <string>

#include "lingd/error.hpp"
#include "lingd/io.hpp"
#include "lingd/version.hpp"

using Eigen::MatrixXd;
using lingd::ErrorCode;
using lingd::json;

namespace {

MatrixXd example1() {
  MatrixXd b = MatrixXd::Zero(5, 5);
  b(1, 0) = 1.2;
  b(1, 3) = -0.3;
  b(2, 1) = 2.0;
  b(3, 2) = -1.0;
  b(4, 1) = 3.0;
  return b;
}

template <typename F>
lingd::Error error_of(F&& f) {
  try {
    f();
  } catch (const lingd::Error& e) {
    return e;
  }
  FAIL("expected lingd::Error");
  return lingd::Error(ErrorCode::InvalidArgument, "");
}

bool contains(const std::string& haystack, const std::string& needle) {
  return haystack.find(needle) != std::string::npos;
}

lingd::Dataset read_csv_string(const std::string& s) {
  std::istringstream is(s);
  return lingd::read_csv(is);
}

}  // namespace

TEST_CASE("CSV round trip is exact") {
  MatrixXd v(2, 3);
  v << 0.1, -1e-300, 123456789.123456789, 1.0 / 3.0, -2.5e17, 0.0;
  const lingd::Dataset d(v, {"a", "b"});
  std::ostringstream os;
  lingd::write_csv(os, d);
  const auto back = read_csv_string(os.str());
  CHECK(back.values() == v);
  CHECK(back.names() == std::vector<std::string>{"a", "b"});
  CHECK(os.str().substr(0, 4) == "a,b\n");
}

TEST_CASE("CSV parse errors name the line") {
  auto e = error_of([] { read_csv_string("x1,x2\n1,2\n3\n"); });
  CHECK(e.code() == ErrorCode::ParseError);
  CHECK(contains(e.what(), "line 3"));

  e = error_of([] { read_csv_string("x1,x2\n1,2\n3,4\n5,abc\n"); });
  CHECK(e.code() == ErrorCode::ParseError);
  CHECK(contains(e.what(), "line 4, column 2"));

  e = error_of([] { read_csv_string("x1,x2\n1,nan\n3,4\n"); });
  CHECK(contains(e.what(), "line 2"));

  CHECK(error_of([] { read_csv_string(""); }).code() == ErrorCode::ParseError);
  // Fewer samples than variables.
  CHECK(error_of([] { read_csv_string("x1,x2,x3\n1,2,3\n"); }).code() == ErrorCode::ParseError);
}

TEST_CASE("CSV accepts blank lines, spaces and a leading plus") {
  const auto d = read_csv_string("x1, x2\n\n 1, +2\n3 ,4\n\n");
  CHECK(d.n_samples() == 2);
  CHECK(d.values()(1, 0) == 2.0);
  CHECK(d.names()[1] == "x2");
}

TEST_CASE("model JSON with B") {
  const json j = json::parse(R"({
    "schema_version": 1,
    "variables": ["a", "b"],
    "B": [[0, 0], [0.5, 0]],
    "errors": [{"dist": "uniform", "scale": 2}, {"dist": "laplace"}]
  })");
  const auto m = lingd::model_from_json(j);
  CHECK(m.names == std::vector<std::string>{"a", "b"});
  CHECK(m.model.b(1, 0) == 0.5);
  CHECK(m.model.errors[0].dist == lingd::Distribution::Uniform);
  CHECK(m.model.errors[0].scale == 2.0);
  CHECK(m.model.errors[1].scale == 1.0);
  CHECK_FALSE(m.b_dyn);

  const auto again = lingd::model_from_json(lingd::model_to_json(m));
  CHECK(again.model.b.matrix() == m.model.b.matrix());
  CHECK(again.names == m.names);
}

TEST_CASE("model JSON with B_dyn removes self-loops") {
  const json j = json::parse(R"({"B_dyn": [[0.5, 0], [0.8, 0]]})");
  const auto m = lingd::model_from_json(j);
  REQUIRE(m.b_dyn);
  CHECK(m.model.b(0, 0) == 0.0);
  CHECK(m.model.error_gain(0) == doctest::Approx(2.0));
  CHECK(m.names == std::vector<std::string>{"x1", "x2"});
}

TEST_CASE("model JSON errors") {
  auto e = error_of([] { lingd::model_from_json(json::parse(R"({"B_dyn": [[0, 0], [0.3, 1.0]]})")); });
  CHECK(e.code() == ErrorCode::UnitSelfLoop);
  CHECK(contains(e.what(), "'x2'"));

  e = error_of([] { lingd::model_from_json(json::parse(R"({"B": [[0, 1], [2]]})")); });
  CHECK(e.code() == ErrorCode::SchemaMismatch);
  CHECK(contains(e.what(), "B"));

  e = error_of([] { lingd::model_from_json(json::parse(R"({"B": [[0.5, 0], [0, 0]]})")); });
  CHECK(e.code() == ErrorCode::NonZeroDiagonal);

  e = error_of([] { lingd::model_from_json(json::parse(R"({"schema_version": 2, "B": [[0]]})")); });
  CHECK(e.code() == ErrorCode::SchemaMismatch);

  e = error_of([] {
    lingd::model_from_json(json::parse(R"({"B": [[0, 0], [1, 0]], "errors": [{}, {"scale": "big"}]})"));
  });
  CHECK(contains(e.what(), "errors[1].scale"));

  e = error_of([] { lingd::model_from_json(json::parse(R"({"variables": ["a"]})")); });
  CHECK(e.code() == ErrorCode::SchemaMismatch);
}

TEST_CASE("read_json_file maps syntax errors") {
  const std::string path = "test_io_bad.json";
  lingd::write_text_file(path, "{\"B\": [[0, 1],\n");
  const auto e = error_of([&] { lingd::read_json_file(path); });
  CHECK(e.code() == ErrorCode::ParseError);
  CHECK(contains(e.what(), path));
  CHECK(error_of([] { lingd::read_json_file("does/not/exist.json"); }).code() == ErrorCode::Io);
}

TEST_CASE("DOT export") {
  const MatrixXd w = MatrixXd::Identity(5, 5) - example1();
  lingd::DiscoverConfig cfg;
  cfg.prune = lingd::PruneMethod::Exact;
  const auto ec = lingd::discover_from_unmixing(w, cfg);
  const std::string stable = lingd::to_dot(ec.candidates[0], ec.names, "candidate_1");
  CHECK(stable.substr(0, 25) == "digraph \"candidate_1\" {\n ");
  CHECK(contains(stable, "\"x1\" -> \"x2\" [label=\"1.2000\"];"));
  CHECK(contains(stable, "\"x4\" -> \"x2\" [label=\"-0.3000\"];"));
  CHECK(contains(stable, "spectral radius 0.8434 (stable)"));
  CHECK_FALSE(contains(stable, "dashed"));
  const std::string unstable = lingd::to_dot(ec.candidates[1], ec.names, "candidate_2");
  CHECK(contains(unstable, "edge [style=dashed]"));
  CHECK(contains(unstable, "\"x3\" -> \"x2\" [label=\"0.5000\"];"));
  CHECK(unstable.back() == '\n');
}

TEST_CASE("equivalence class JSON") {
  const MatrixXd w = MatrixXd::Identity(5, 5) - example1();
  lingd::DiscoverConfig cfg;
  cfg.prune = lingd::PruneMethod::Exact;
  const auto ec = lingd::discover_from_unmixing(w, cfg);
  const json j = lingd::to_json(ec);
  CHECK(j["schema_version"] == 1);
  CHECK(j["population_mode"] == true);
  CHECK(j["candidates"].size() == 2);
  CHECK(j["candidates"][0]["stable"] == true);
  CHECK(j["candidates"][1]["cycles"][0]["product"].get<double>() == doctest::Approx(1.0 / 0.6));
  // Serialization is a pure function of the class.
  CHECK(j.dump(2) == lingd::to_json(lingd::discover_from_unmixing(w, cfg)).dump(2));

  const auto records = lingd::candidates_from_json(json::parse(j.dump()));
  REQUIRE(records.size() == 2);
  CHECK(records[0].b == ec.candidates[0].b.matrix());
  CHECK(records[0].stable);
  CHECK_FALSE(records[1].stable);
  CHECK(error_of([] { lingd::candidates_from_json(json::object()); }).code() == ErrorCode::SchemaMismatch);
}

TEST_CASE("analysis against the truth") {
  const MatrixXd w = MatrixXd::Identity(5, 5) - example1();
  lingd::DiscoverConfig cfg;
  cfg.prune = lingd::PruneMethod::Exact;
  const auto ec = lingd::discover_from_unmixing(w, cfg);
  const auto records = lingd::candidates_from_json(lingd::to_json(ec));
  const auto r = lingd::analyze(records, example1());
  CHECK(r.best == 0);
  CHECK(r.candidates[0].structural_distance == 0);
  CHECK(r.candidates[0].max_coefficient_error < 1e-12);
  // Three cycle edges reversed (2 each), x1 -> x2 moves to x1 -> x4 (2).
  CHECK(r.candidates[1].structural_distance == 8);
  CHECK(r.stability_selected_truth);
  CHECK(r.stable_set_contains_truth);
  CHECK(contains(lingd::summary(r), "stability filter selected the truth: yes"));
  CHECK(error_of([] { lingd::analyze({}, MatrixXd::Zero(2, 2)); }).code() == ErrorCode::SchemaMismatch);
  CHECK(lingd::structural_hamming_distance(MatrixXd::Zero(2, 2), MatrixXd::Zero(2, 2)) == 0);
  CHECK(error_of([&] { lingd::analyze(records, MatrixXd::Zero(4, 4)); }).code() == ErrorCode::SchemaMismatch);

  // A candidate set compared with one of its own members.
  const auto self = lingd::analyze(records, records[1].b);
  CHECK(self.best == 1);
  CHECK(self.candidates[1].structural_distance == 0);
  CHECK(self.candidates[1].max_coefficient_error == 0.0);
}

TEST_CASE("provenance records model, seed and version") {
  const auto m = lingd::model_from_json(json::parse(R"({"B_dyn": [[0.5, 0], [0.8, 0]]})"));
  const json j = lingd::provenance_json(m, 100, 7);
  CHECK(j["seed"] == 7);
  CHECK(j["n_samples"] == 100);
  CHECK(j["version"] == lingd::kVersion);
  CHECK(j["model"]["B_dyn"][0][0] == 0.5);
  CHECK(j["model"]["errors"][0]["dist"] == "signed-square-gaussian");
  CHECK(j["error_gain"][0].get<double>() == doctest::Approx(2.0));
}

TEST_CASE("format_double is locale independent and round-trips") {
  CHECK(lingd::format_double(0.5) == "0.5");
  const double v = 0.1 + 0.2;
  CHECK(std::stod(lingd::format_double(v)) == v);
}
