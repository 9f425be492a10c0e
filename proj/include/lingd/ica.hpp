#pragma once

// Fixed-point ICA (FastICA) with symmetric or deflationary orthogonalization.

#include <Eigen/Dense>

#include <cstdint>
#include <optional>

#include "lingd/dataset.hpp"

namespace lingd {

enum class Nonlinearity { Tanh, Cube };
enum class Orthogonalization { Symmetric, Deflation };

struct IcaConfig {
  Nonlinearity nonlinearity = Nonlinearity::Tanh;
  Orthogonalization mode = Orthogonalization::Symmetric;
  int max_iter = 1000;
  // Largest sign-invariant entry change of any unmixing row between sweeps.
  double tol = 1e-6;
  int restarts = 5;
  std::uint64_t seed = 0;
};

struct Whitening {
  Eigen::MatrixXd whitened;  // zero mean, identity covariance
  Eigen::MatrixXd v;         // symmetric whitening matrix cov^(-1/2)
  Eigen::VectorXd mean;
};

/// Centers X (variables by samples) and whitens it with V = cov^(-1/2),
/// where cov uses the 1/N normalization. Throws RankDeficient when the
/// smallest covariance eigenvalue is below 1e-10 relative to the largest.
Whitening center_whiten(const Eigen::MatrixXd& x);
inline Whitening center_whiten(const Dataset& x) { return center_whiten(x.values()); }

struct UnmixingEstimate {
  // Rows are unmixing directions acting on the original (uncentered) data.
  Eigen::MatrixXd w;
  bool converged = false;
  int iterations_used = 0;
  // Negentropy approximation of each recovered component.
  Eigen::VectorXd negentropy;

  double contrast() const { return negentropy.sum(); }
  /// Component i looks Gaussian: its negentropy proxy is below `threshold`.
  bool near_gaussian(Eigen::Index i, double threshold = 1e-5) const {
    return negentropy(i) < threshold;
  }
};

/// Runs `config.restarts` randomly initialized fixed-point iterations and
/// keeps the converged run with the largest summed contrast. When
/// `initial_guess` (original coordinates) is given, the first run starts
/// from it. A non-converged estimate is still returned, flagged.
UnmixingEstimate fastica(const Eigen::MatrixXd& x, const IcaConfig& config,
                         const std::optional<Eigen::MatrixXd>& initial_guess = std::nullopt);
inline UnmixingEstimate fastica(const Dataset& x, const IcaConfig& config) {
  return fastica(x.values(), config);
}

/// Amari index of P = W A, normalized to [0, 1]:
///
///   (sum_i (sum_j |p_ij| / max_k |p_ik| - 1)
///  + sum_j (sum_i |p_ij| / max_k |p_kj| - 1)) / (2 n (n - 1))
///
/// Zero exactly when P is a scaled permutation matrix.
double amari_error(const Eigen::MatrixXd& w, const Eigen::MatrixXd& a);

}  // namespace lingd
