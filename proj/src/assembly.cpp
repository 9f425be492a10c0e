#include "lingd/assembly.hpp"

#include <algorithm>
#include <sstream>

#include "lingd/error.hpp"
#include "lingd/random.hpp"

namespace lingd {

std::string to_string(PruneMethod m) {
  switch (m) {
    case PruneMethod::Threshold: return "threshold";
    case PruneMethod::Bootstrap: return "bootstrap";
    case PruneMethod::Exact: return "exact";
  }
  return "unknown";
}

std::string to_string(SearchMode m) {
  return m == SearchMode::Rooks ? "rooks" : "k-best";
}

CandidateModel assemble_candidate(const Eigen::MatrixXd& w, const Permutation& sigma,
                                  const ZeroPattern& pattern) {
  const Eigen::Index n = w.rows();
  if (w.cols() != n || pattern.size() != n || sigma.size() != n) {
    throw Error(ErrorCode::InvalidArgument, "W, pattern and permutation sizes differ");
  }
  Eigen::MatrixXd masked = w;
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j)
      if (!pattern(i, j)) masked(i, j) = 0.0;

  Eigen::MatrixXd permuted = sigma.apply_rows(masked);
  Eigen::VectorXd diagonal = permuted.diagonal();
  for (Eigen::Index i = 0; i < n; ++i) {
    if (diagonal(i) == 0.0) {
      throw Error(ErrorCode::ZeroDiagonalAfterPermute,
                  "position " + std::to_string(i + 1) + " receives a zero from row " +
                      std::to_string(sigma[static_cast<int>(i)] + 1));
    }
  }
  Eigen::MatrixXd normalized = diagonal.cwiseInverse().asDiagonal() * permuted;
  normalized.diagonal().setOnes();

  Eigen::MatrixXd b = Eigen::MatrixXd::Identity(n, n) - normalized;
  b.diagonal().setZero();

  CandidateModel c{sigma, std::move(normalized), std::move(diagonal), validate(b), {}, true, 0.0,
                   false, false};
  c.cycles = find_simple_cycles(c.b);
  c.disjoint_cycles = has_disjoint_cycles(c.b);
  const Stability s = is_stable(c.b);
  c.spectral_radius = s.spectral_radius;
  c.stable = s.stable;
  c.marginal = s.marginal;
  return c;
}

namespace {

std::string describe(const ZeroPattern& p) {
  std::ostringstream os;
  for (Eigen::Index i = 0; i < p.size(); ++i) {
    os << (i ? " / " : "");
    for (Eigen::Index j = 0; j < p.size(); ++j) os << (p(i, j) ? 'X' : '.');
  }
  return os.str();
}

void search_and_assemble(EquivalenceClass& ec, const DiscoverConfig& config,
                         const AssignmentLoss& loss) {
  const Eigen::MatrixXd& w = ec.w_ica;
  if (config.search == SearchMode::Rooks) {
    const RookSearchResult rooks = constrained_n_rooks(ec.pattern, config.max_permutations);
    if (rooks.status == RookStatus::NoAdmissiblePermutation) {
      throw Error(ErrorCode::NoAdmissiblePermutation,
                  "no zeroless-diagonal row permutation for pattern " + describe(ec.pattern));
    }
    for (const auto& p : rooks.permutations) {
      ec.candidates.push_back(assemble_candidate(w, p, ec.pattern));
    }
  } else {
    const auto ranked = k_best_assignments(w, config.k, loss);
    if (ranked.empty()) {
      throw Error(ErrorCode::NoAdmissiblePermutation, "no finite-cost assignment");
    }
    std::vector<Permutation> perms;
    for (const auto& r : ranked) perms.push_back(r.permutation);
    std::sort(perms.begin(), perms.end());
    for (const auto& p : perms) {
      // The chosen diagonal is kept even where pruning would zero it.
      ZeroPattern kept = ec.pattern;
      for (int i = 0; i < p.size(); ++i) kept = kept.with_nonzero(p[i], i);
      ec.candidates.push_back(assemble_candidate(w, p, kept));
    }
  }
  std::stable_sort(ec.candidates.begin(), ec.candidates.end(),
                   [](const CandidateModel& a, const CandidateModel& b) {
                     return a.spectral_radius < b.spectral_radius;
                   });
}

}  // namespace

EquivalenceClass discover_from_unmixing(const Eigen::MatrixXd& w, const DiscoverConfig& config,
                                        std::vector<std::string> names) {
  if (w.rows() != w.cols() || w.rows() == 0) {
    throw Error(ErrorCode::InvalidArgument, "unmixing matrix must be square");
  }
  if (config.prune == PruneMethod::Bootstrap) {
    throw Error(ErrorCode::InvalidArgument, "bootstrap pruning needs data, not a fixed W");
  }
  EquivalenceClass ec;
  ec.names = names.empty() ? default_names(w.rows()) : std::move(names);
  ec.w_ica = w;
  ec.prune = config.prune;
  ec.search = config.search;
  ec.population_mode = true;
  ec.pattern = config.prune == PruneMethod::Exact ? ZeroPattern::nonzeros_of(w)
                                                  : threshold_prune(w, config.tau);
  search_and_assemble(ec, config, inverse_abs_loss());
  return ec;
}

EquivalenceClass discover(const Dataset& x, const DiscoverConfig& config) {
  if (x.n_vars() < 2) throw Error(ErrorCode::InvalidArgument, "discovery needs at least 2 variables");
  EquivalenceClass ec;
  ec.names = x.names();
  ec.prune = config.prune;
  ec.search = config.search;
  AssignmentLoss loss = inverse_abs_loss();

  if (config.prune == PruneMethod::Bootstrap) {
    BootstrapPruneResult boot = bootstrap_prune(x, config.ica, config.bootstrap, config.seed);
    ec.w_ica = boot.reference.w;
    ec.ica_converged = boot.reference.converged;
    ec.ica_iterations = boot.reference.iterations_used;
    ec.pattern = boot.pattern;
    loss = zero_probability_loss(boot.zero_probability);
    ec.bootstrap = std::move(boot);
  } else {
    IcaConfig ica = config.ica;
    ica.seed = derive_seed(config.seed, "reference");
    const UnmixingEstimate est = fastica(x.values(), ica);
    ec.w_ica = est.w;
    ec.ica_converged = est.converged;
    ec.ica_iterations = est.iterations_used;
    ec.pattern = config.prune == PruneMethod::Exact ? ZeroPattern::nonzeros_of(est.w)
                                                    : threshold_prune(est.w, config.tau);
  }
  search_and_assemble(ec, config, loss);
  return ec;
}

StabilityReport stability_filter(const EquivalenceClass& ec) {
  StabilityReport report;
  for (const auto& c : ec.candidates) {
    if (c.stable) {
      report.stable.push_back(c);
      report.uniqueness_guaranteed = report.uniqueness_guaranteed || c.disjoint_cycles;
    } else {
      ++report.unstable_count;
      report.marginal_count += c.marginal;
    }
  }
  return report;
}

}  // namespace lingd
