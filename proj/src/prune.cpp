#include "lingd/prune.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <string>
#include <thread>

#include "lingd/error.hpp"
#include "lingd/perm_search.hpp"
#include "lingd/random.hpp"

namespace lingd {

ZeroPattern threshold_prune(const Eigen::MatrixXd& w, double tau) {
  if (!(tau > 0.0)) throw Error(ErrorCode::InvalidArgument, "threshold must be positive");
  if (w.rows() != w.cols() || w.rows() == 0) {
    throw Error(ErrorCode::InvalidArgument, "unmixing matrix must be square");
  }
  BoolMatrix mask(w.rows(), w.cols());
  for (Eigen::Index i = 0; i < w.rows(); ++i) {
    const double peak = w.row(i).cwiseAbs().maxCoeff();
    if (!(peak > 0.0)) throw Error(ErrorCode::AllRowPruned, "row " + std::to_string(i + 1) + " is zero");
    for (Eigen::Index j = 0; j < w.cols(); ++j) mask(i, j) = std::abs(w(i, j)) / peak >= tau;
  }
  return ZeroPattern(std::move(mask));
}

Alignment align_to_reference(const Eigen::MatrixXd& w, const Eigen::MatrixXd& reference,
                             double floor) {
  const Eigen::Index n = reference.rows();
  if (w.rows() != n || w.cols() != reference.cols()) {
    throw Error(ErrorCode::InvalidArgument, "alignment needs matrices of equal shape");
  }
  // cost(r, c): -|cos| between input row r and reference row c.
  Eigen::MatrixXd cost(n, n);
  for (Eigen::Index r = 0; r < n; ++r) {
    for (Eigen::Index c = 0; c < n; ++c) {
      const double denom = w.row(r).norm() * reference.row(c).norm();
      cost(r, c) = denom > 0.0 ? -std::abs(w.row(r).dot(reference.row(c))) / denom : 0.0;
    }
  }
  const std::vector<int> col_of_row = hungarian(cost);

  Alignment out;
  out.aligned.resize(n, w.cols());
  out.source_row.assign(static_cast<std::size_t>(n), -1);
  out.scale.resize(n);
  double total = 0.0;
  for (Eigen::Index r = 0; r < n; ++r) {
    const int c = col_of_row[static_cast<std::size_t>(r)];
    total -= cost(r, c);
    const double norm2 = w.row(r).squaredNorm();
    const double s = norm2 > 0.0 ? w.row(r).dot(reference.row(c)) / norm2 : 0.0;
    out.source_row[static_cast<std::size_t>(c)] = static_cast<int>(r);
    out.scale(c) = s;
    out.aligned.row(c) = s * w.row(r);
  }
  out.mean_abs_cosine = total / static_cast<double>(n);
  if (out.mean_abs_cosine < floor) {
    throw Error(ErrorCode::AlignmentFailure,
                "mean |cosine| " + std::to_string(out.mean_abs_cosine) + " below floor " +
                    std::to_string(floor));
  }
  return out;
}

double empirical_quantile(std::vector<double> values, double p) {
  if (values.empty()) throw Error(ErrorCode::InvalidArgument, "quantile of an empty sample");
  std::sort(values.begin(), values.end());
  const double h = (static_cast<double>(values.size()) - 1.0) * std::clamp(p, 0.0, 1.0);
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const auto hi = std::min(lo + 1, values.size() - 1);
  return values[lo] + (h - static_cast<double>(lo)) * (values[hi] - values[lo]);
}

ZeroPattern pattern_from_bootstrap(const std::vector<Eigen::MatrixXd>& replicates, double alpha,
                                   Eigen::MatrixXd* lower, Eigen::MatrixXd* upper) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw Error(ErrorCode::InvalidArgument, "alpha must be in (0, 1)");
  if (replicates.empty()) throw Error(ErrorCode::InvalidArgument, "no bootstrap replicates");
  const Eigen::Index n = replicates.front().rows();
  BoolMatrix mask(n, n);
  Eigen::MatrixXd lo(n, n), hi(n, n);
  std::vector<double> sample(replicates.size());
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      for (std::size_t b = 0; b < replicates.size(); ++b) sample[b] = replicates[b](i, j);
      lo(i, j) = empirical_quantile(sample, alpha / 2.0);
      hi(i, j) = empirical_quantile(sample, 1.0 - alpha / 2.0);
      mask(i, j) = !(lo(i, j) <= 0.0 && 0.0 <= hi(i, j));
    }
  }
  if (lower) *lower = lo;
  if (upper) *upper = hi;
  return ZeroPattern(std::move(mask));
}

BootstrapPruneResult bootstrap_prune(const Dataset& x, const IcaConfig& ica,
                                     const BootstrapConfig& config, std::uint64_t seed) {
  if (config.n_boot < 20) throw Error(ErrorCode::InvalidArgument, "n_boot must be at least 20");
  if (config.threads < 1) throw Error(ErrorCode::InvalidArgument, "threads must be at least 1");

  IcaConfig ref_cfg = ica;
  ref_cfg.seed = derive_seed(seed, "reference");
  UnmixingEstimate reference = fastica(x.values(), ref_cfg);

  const Eigen::Index n_samples = x.n_samples();
  const auto n_boot = static_cast<std::size_t>(config.n_boot);
  std::vector<Eigen::MatrixXd> replicates(n_boot);
  std::vector<std::exception_ptr> failures(n_boot);

  auto run_replicate = [&](std::size_t b) {
    try {
      const std::uint64_t rep_seed = derive_seed(derive_seed(seed, "bootstrap"), b);
      Rng rng(rep_seed);
      Eigen::MatrixXd resampled(x.n_vars(), n_samples);
      for (Eigen::Index t = 0; t < n_samples; ++t) {
        resampled.col(t) = x.values().col(static_cast<Eigen::Index>(
            rng.below(static_cast<std::uint64_t>(n_samples))));
      }
      // Replicates start from the full-data estimate; alignment still
      // resolves any row permutation or sign change the iteration picks up.
      IcaConfig rep_cfg = ica;
      rep_cfg.seed = derive_seed(rep_seed, "ica");
      rep_cfg.restarts = 1;
      const UnmixingEstimate est = fastica(resampled, rep_cfg, reference.w);
      replicates[b] = align_to_reference(est.w, reference.w, config.alignment_floor).aligned;
    } catch (...) {
      failures[b] = std::current_exception();
    }
  };

  const auto workers = std::min<std::size_t>(static_cast<std::size_t>(config.threads), n_boot);
  if (workers <= 1) {
    for (std::size_t b = 0; b < n_boot; ++b) run_replicate(b);
  } else {
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        for (std::size_t b = w; b < n_boot; b += workers) run_replicate(b);
      });
    }
    for (auto& t : pool) t.join();
  }
  for (const auto& f : failures) {
    if (f) std::rethrow_exception(f);
  }

  BootstrapPruneResult out{std::move(reference), ZeroPattern::full(x.n_vars()), std::move(replicates),
                           {}, {}, {}, config.alpha};
  out.pattern = pattern_from_bootstrap(out.replicates, config.alpha, &out.lower, &out.upper);

  const Eigen::Index n = x.n_vars();
  out.zero_probability.resize(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      double below = 0.0, above = 0.0;
      for (const auto& r : out.replicates) {
        below += r(i, j) <= 0.0;
        above += r(i, j) >= 0.0;
      }
      out.zero_probability(i, j) = std::min(1.0, 2.0 * std::min(below, above) / static_cast<double>(n_boot));
    }
  }
  return out;
}

}  // namespace lingd
