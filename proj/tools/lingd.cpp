// lingd: simulate linear non-Gaussian SEM data, discover the equivalence
// class of cyclic models behind a dataset, and compare candidates to truth.
//
// Exit codes: 0 success, 2 bad arguments, 3 data error, 4 no admissible
// permutation, 5 numeric failure.

#include <filesystem>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "lingd/analysis.hpp"
#include "lingd/assembly.hpp"
#include "lingd/error.hpp"
#include "lingd/io.hpp"
#include "lingd/simulate.hpp"
#include "lingd/version.hpp"

namespace {

enum ExitCode : int {
  kOk = 0,
  kBadArguments = 2,
  kDataError = 3,
  kNoAdmissible = 4,
  kNumericFailure = 5,
};

int exit_code(lingd::ErrorCode code) {
  using lingd::ErrorCode;
  switch (code) {
    case ErrorCode::InvalidArgument: return kBadArguments;
    case ErrorCode::ParseError:
    case ErrorCode::SchemaMismatch:
    case ErrorCode::Io:
    case ErrorCode::NonZeroDiagonal:
    case ErrorCode::UnitSelfLoop:
    case ErrorCode::SingularReducedForm:
    case ErrorCode::RankDeficient: return kDataError;
    case ErrorCode::NoAdmissiblePermutation: return kNoAdmissible;
    default: return kNumericFailure;
  }
}

struct SimulateArgs {
  std::string model;
  long long n_samples = 0;
  std::uint64_t seed = 1;
  std::string out;
  std::string provenance;
};

struct DiscoverArgs {
  std::string data;
  std::string population;
  std::string out;
  std::string dot_dir;
  std::string bootstrap_json;
  std::string prune = "threshold";
  bool prune_given = false;
  std::string search = "rooks";
  std::string nonlinearity = "tanh";
  std::string ica_mode = "symmetric";
  lingd::DiscoverConfig config;
};

struct AnalyzeArgs {
  std::string candidates;
  std::string truth;
  std::string out;
};

int run_simulate(const SimulateArgs& a) {
  const lingd::LoadedModel m = lingd::read_model_file(a.model);
  const lingd::Dataset raw = lingd::sample_equilibrium(m.model, a.n_samples, a.seed);
  const lingd::Dataset data(raw.values(), m.names, raw.provenance());
  lingd::write_csv_file(a.out, data);
  const std::string prov = a.provenance.empty() ? a.out + ".provenance.json" : a.provenance;
  lingd::write_text_file(prov, lingd::provenance_json(m, a.n_samples, a.seed).dump(2) + "\n");
  std::cout << "wrote " << data.n_samples() << " samples of " << data.n_vars() << " variables to "
            << a.out << "\n";
  return kOk;
}

int run_discover(DiscoverArgs a) {
  auto& cfg = a.config;
  if (!(cfg.bootstrap.alpha > 0.0 && cfg.bootstrap.alpha < 1.0)) {
    throw lingd::Error(lingd::ErrorCode::InvalidArgument, "--alpha must lie strictly between 0 and 1");
  }
  cfg.prune = a.prune == "bootstrap" ? lingd::PruneMethod::Bootstrap : lingd::PruneMethod::Threshold;
  cfg.search = a.search == "kbest" ? lingd::SearchMode::KBest : lingd::SearchMode::Rooks;
  cfg.ica.nonlinearity = a.nonlinearity == "cube" ? lingd::Nonlinearity::Cube : lingd::Nonlinearity::Tanh;
  cfg.ica.mode = a.ica_mode == "deflation" ? lingd::Orthogonalization::Deflation
                                           : lingd::Orthogonalization::Symmetric;

  lingd::EquivalenceClass ec;
  if (!a.population.empty()) {
    if (cfg.prune == lingd::PruneMethod::Bootstrap) {
      throw lingd::Error(lingd::ErrorCode::InvalidArgument,
                         "--population cannot be combined with --prune bootstrap");
    }
    const lingd::LoadedModel m = lingd::read_model_file(a.population);
    const Eigen::MatrixXd w =
        Eigen::MatrixXd::Identity(m.model.size(), m.model.size()) - m.model.b.matrix();
    // W = I - B has exact zeros; threshold only when asked for.
    if (!a.prune_given) cfg.prune = lingd::PruneMethod::Exact;
    ec = lingd::discover_from_unmixing(w, cfg, m.names);
  } else {
    const lingd::Dataset data = lingd::read_csv_file(a.data);
    if (data.n_vars() < 2) {
      throw lingd::Error(lingd::ErrorCode::ParseError, a.data + ": need at least 2 columns");
    }
    ec = lingd::discover(data, cfg);
  }

  if (!a.out.empty()) lingd::write_text_file(a.out, lingd::to_json(ec).dump(2) + "\n");
  if (!a.dot_dir.empty()) {
    std::filesystem::create_directories(a.dot_dir);
    for (std::size_t k = 0; k < ec.candidates.size(); ++k) {
      const std::string name = "candidate_" + std::to_string(k + 1);
      lingd::write_text_file((std::filesystem::path(a.dot_dir) / (name + ".dot")).string(),
                             lingd::to_dot(ec.candidates[k], ec.names, name));
    }
  }
  if (!a.bootstrap_json.empty() && ec.bootstrap) {
    lingd::write_text_file(a.bootstrap_json, lingd::bootstrap_to_json(*ec.bootstrap).dump(2) + "\n");
  }
  std::cout << lingd::summary(ec);
  return kOk;
}

int run_analyze(const AnalyzeArgs& a) {
  const auto candidates = lingd::candidates_from_json(lingd::read_json_file(a.candidates));
  const lingd::LoadedModel truth = lingd::read_model_file(a.truth);
  const lingd::AnalysisReport report = lingd::analyze(candidates, truth.model.b.matrix());
  if (!a.out.empty()) lingd::write_text_file(a.out, lingd::to_json(report).dump(2) + "\n");
  std::cout << lingd::summary(report);
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Discovery of linear non-Gaussian cyclic structural equation models"};
  app.set_version_flag("--version", lingd::kVersion);
  app.require_subcommand(1);

  SimulateArgs sim;
  auto* simulate = app.add_subcommand("simulate", "Sample equilibrium data from a model file");
  simulate->add_option("--model", sim.model, "Model JSON (variables, B or B_dyn, errors)")
      ->required()
      ->check(CLI::ExistingFile);
  simulate->add_option("-n,--samples", sim.n_samples, "Number of samples")
      ->required()
      ->check(CLI::Range(1LL, 100000000LL));
  simulate->add_option("--seed", sim.seed, "Master seed")->capture_default_str();
  simulate->add_option("-o,--out", sim.out, "Output CSV")->required();
  simulate->add_option("--provenance", sim.provenance,
                       "Provenance JSON (default: <out>.provenance.json)");

  DiscoverArgs dis;
  auto* discover = app.add_subcommand("discover", "Find all candidate SEMs for a dataset");
  auto* data_opt = discover->add_option("--data", dis.data, "Input CSV (header x1..xn)")
                       ->check(CLI::ExistingFile);
  auto* pop_opt = discover->add_option("--population", dis.population,
                                       "Skip ICA: use W = I - B of this model file")
                      ->check(CLI::ExistingFile);
  data_opt->excludes(pop_opt);
  discover->add_option("-o,--out", dis.out, "Candidate-set JSON output");
  discover->add_option("--dot-dir", dis.dot_dir, "Directory for one DOT file per candidate");
  discover->add_option("--bootstrap-json", dis.bootstrap_json,
                       "Per-entry bootstrap quantiles (bootstrap pruning only)");
  auto* prune_opt = discover->add_option("--prune", dis.prune, "Pruning method")
      ->check(CLI::IsMember({"threshold", "bootstrap"}))
      ->capture_default_str();
  discover->add_option("--tau", dis.config.tau, "Threshold on row-max-normalized |W| entries")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  discover->add_option("--n-boot", dis.config.bootstrap.n_boot, "Bootstrap replicates")
      ->check(CLI::Range(20, 100000))
      ->capture_default_str();
  discover->add_option("--alpha", dis.config.bootstrap.alpha, "Quantile test level")
      ->check(CLI::Range(0.0, 1.0))
      ->capture_default_str();
  discover->add_option("--search", dis.search, "Permutation search")
      ->check(CLI::IsMember({"rooks", "kbest"}))
      ->capture_default_str();
  discover->add_option("--k", dis.config.k, "Assignments kept by --search kbest")
      ->check(CLI::Range(std::size_t{1}, std::size_t{1000000}))
      ->capture_default_str();
  discover->add_option("--nonlinearity", dis.nonlinearity, "ICA contrast")
      ->check(CLI::IsMember({"tanh", "cube"}))
      ->capture_default_str();
  discover->add_option("--ica-mode", dis.ica_mode, "ICA orthogonalization")
      ->check(CLI::IsMember({"symmetric", "deflation"}))
      ->capture_default_str();
  discover->add_option("--max-iter", dis.config.ica.max_iter, "ICA iteration cap")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  discover->add_option("--tol", dis.config.ica.tol, "ICA convergence tolerance")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  discover->add_option("--restarts", dis.config.ica.restarts, "ICA random restarts")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  discover->add_option("--max-permutations", dis.config.max_permutations,
                       "Cap on admissible permutations")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  discover->add_option("--seed", dis.config.seed, "Master seed")->capture_default_str();
  discover->add_option("--threads", dis.config.bootstrap.threads,
                       "Worker threads for bootstrap replicates")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();

  AnalyzeArgs ana;
  auto* analyze = app.add_subcommand("analyze", "Compare a candidate set with a ground-truth model");
  analyze->add_option("--candidates", ana.candidates, "Candidate-set JSON from discover")
      ->required()
      ->check(CLI::ExistingFile);
  analyze->add_option("--truth", ana.truth, "Ground-truth model JSON")
      ->required()
      ->check(CLI::ExistingFile);
  analyze->add_option("-o,--out", ana.out, "Report JSON output");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kBadArguments;
  }

  try {
    if (simulate->parsed()) return run_simulate(sim);
    if (discover->parsed()) {
      if (dis.data.empty() && dis.population.empty()) {
        std::cerr << "discover: one of --data or --population is required\n";
        return kBadArguments;
      }
      dis.prune_given = prune_opt->count() > 0;
      return run_discover(dis);
    }
    if (analyze->parsed()) return run_analyze(ana);
  } catch (const lingd::Error& e) {
    std::cerr << "lingd: " << e.what() << "\n";
    return exit_code(e.code());
  } catch (const std::exception& e) {
    std::cerr << "lingd: " << e.what() << "\n";
    return kNumericFailure;
  }
  return kBadArguments;
}
