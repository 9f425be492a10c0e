#pragma once

// From admissible permutations to candidate SEMs, the full discovery
// pipeline, and the stability filter.

#include <Eigen/Dense>

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "lingd/dataset.hpp"
#include "lingd/ica.hpp"
#include "lingd/pattern.hpp"
#include "lingd/perm_search.hpp"
#include "lingd/prune.hpp"
#include "lingd/sem.hpp"

namespace lingd {

struct CandidateModel {
  Permutation permutation;
  Eigen::MatrixXd w_normalized;  // unit diagonal
  // Diagonal of the permuted, masked W before normalization. Candidate error
  // i is the permuted ICA source mapping[i] divided by diagonal(i).
  Eigen::VectorXd diagonal;
  CoefficientMatrix b;
  std::vector<CycleInfo> cycles;
  bool disjoint_cycles = true;
  double spectral_radius = 0.0;
  bool stable = false;
  bool marginal = false;
};

/// Permutes the rows of W, zeroes masked entries, divides each row by its
/// diagonal and sets B = I - W'. Throws ZeroDiagonalAfterPermute when a
/// diagonal entry ends up masked or zero.
CandidateModel assemble_candidate(const Eigen::MatrixXd& w, const Permutation& sigma,
                                  const ZeroPattern& pattern);
inline CandidateModel assemble_candidate(const UnmixingEstimate& w, const Permutation& sigma,
                                         const ZeroPattern& pattern) {
  return assemble_candidate(w.w, sigma, pattern);
}

enum class PruneMethod {
  Threshold,
  Bootstrap,
  Exact,  // keep exactly the nonzero entries (population mode)
};
enum class SearchMode { Rooks, KBest };

std::string to_string(PruneMethod m);
std::string to_string(SearchMode m);

struct DiscoverConfig {
  PruneMethod prune = PruneMethod::Threshold;
  double tau = 0.05;
  BootstrapConfig bootstrap;
  SearchMode search = SearchMode::Rooks;
  std::size_t k = 1;
  IcaConfig ica;
  std::uint64_t seed = 0;
  std::size_t max_permutations = kMaxPermutations;
};

struct EquivalenceClass {
  std::vector<CandidateModel> candidates;  // spectral radius ascending
  std::vector<std::string> names;
  Eigen::MatrixXd w_ica;
  ZeroPattern pattern = ZeroPattern::full(1);
  PruneMethod prune = PruneMethod::Threshold;
  SearchMode search = SearchMode::Rooks;
  bool population_mode = false;
  bool ica_converged = true;
  int ica_iterations = 0;
  std::optional<BootstrapPruneResult> bootstrap;
};

/// ICA, pruning, permutation search and assembly. Throws
/// NoAdmissiblePermutation (with the pattern in the message) when the
/// search comes back empty.
EquivalenceClass discover(const Dataset& x, const DiscoverConfig& config);

/// The same pipeline from a supplied unmixing matrix, skipping ICA. With
/// W = I - B this is the population (infinite-sample) case; PruneMethod
/// Bootstrap is not available here.
EquivalenceClass discover_from_unmixing(const Eigen::MatrixXd& w, const DiscoverConfig& config,
                                        std::vector<std::string> names = {});

struct StabilityReport {
  std::vector<CandidateModel> stable;
  std::size_t unstable_count = 0;
  std::size_t marginal_count = 0;
  // A stable candidate has disjoint cycles, so it is the only stable
  // member of the class.
  bool uniqueness_guaranteed = false;
};

StabilityReport stability_filter(const EquivalenceClass& ec);

}  // namespace lingd
