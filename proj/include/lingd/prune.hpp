#pragma once

// Deciding which entries of an estimated unmixing matrix are zero.

#include <Eigen/Dense>

#include <cstdint>
#include <vector>

#include "lingd/dataset.hpp"
#include "lingd/ica.hpp"
#include "lingd/pattern.hpp"

namespace lingd {

/// Each row is divided by its largest absolute entry, then entries with
/// |w| >= tau are kept. Invariant to nonzero row rescaling of W.
ZeroPattern threshold_prune(const Eigen::MatrixXd& w, double tau);

inline constexpr double kDefaultAlignmentFloor = 0.5;

struct Alignment {
  Eigen::MatrixXd aligned;
  // Row i of `aligned` came from row source_row[i] of the input.
  std::vector<int> source_row;
  Eigen::VectorXd scale;  // signed factor applied to each aligned row
  double mean_abs_cosine = 0.0;
};

/// Matches rows of `w` to rows of `reference` by maximizing total |cosine
/// similarity| (Hungarian), then rescales each matched row by the signed
/// least-squares factor onto its reference row. Throws AlignmentFailure
/// when the mean matched |cosine| is below `floor`.
Alignment align_to_reference(const Eigen::MatrixXd& w, const Eigen::MatrixXd& reference,
                             double floor = kDefaultAlignmentFloor);

/// Linear-interpolation empirical quantile (R type 7) of unsorted values.
double empirical_quantile(std::vector<double> values, double p);

struct BootstrapConfig {
  int n_boot = 100;
  double alpha = 0.05;
  int threads = 1;
  double alignment_floor = kDefaultAlignmentFloor;
};

struct BootstrapPruneResult {
  UnmixingEstimate reference;  // ICA on the full data
  ZeroPattern pattern;
  std::vector<Eigen::MatrixXd> replicates;  // aligned, in replicate order
  Eigen::MatrixXd lower;                    // alpha/2 quantiles
  Eigen::MatrixXd upper;                    // 1 - alpha/2 quantiles
  // Two-sided bootstrap p-value for "entry is zero":
  // min(1, 2 min(#{v <= 0}, #{v >= 0}) / n_boot).
  Eigen::MatrixXd zero_probability;
  double alpha = 0.05;
};

/// Pattern from per-entry bootstrap distributions. An entry is zero when 0
/// lies inside [lower, upper].
ZeroPattern pattern_from_bootstrap(const std::vector<Eigen::MatrixXd>& replicates, double alpha,
                                   Eigen::MatrixXd* lower = nullptr,
                                   Eigen::MatrixXd* upper = nullptr);

/// Resamples whole sample columns with replacement, reruns ICA on each
/// replicate, aligns it to the full-data estimate and applies the quantile
/// test per entry. Replicate seeds depend only on `seed` and the replicate
/// index, so the result does not depend on `threads`.
BootstrapPruneResult bootstrap_prune(const Dataset& x, const IcaConfig& ica,
                                     const BootstrapConfig& config, std::uint64_t seed);

}  // namespace lingd
