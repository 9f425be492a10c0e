#pragma once

// Error-term sampling and equilibrium data generation for linear SEMs.

#include <Eigen/Dense>

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "lingd/dataset.hpp"
#include "lingd/sem.hpp"

namespace lingd {

enum class Distribution {
  SignedSquareGaussian,  // sign(z) * z^2, z ~ N(0, 1)
  Uniform,               // U(-scale, scale)
  Laplace,               // Laplace(0, scale)
  Gaussian,              // N(0, scale^2)
};

std::string_view to_string(Distribution d) noexcept;
Distribution parse_distribution(std::string_view name);

struct ErrorTerm {
  Distribution dist = Distribution::SignedSquareGaussian;
  double scale = 1.0;
};

class ErrorSpec {
 public:
  explicit ErrorSpec(std::vector<ErrorTerm> terms);

  /// n unit-scale signed-square-gaussian terms.
  static ErrorSpec uniform_default(Eigen::Index n);

  Eigen::Index size() const noexcept { return static_cast<Eigen::Index>(terms_.size()); }
  const ErrorTerm& operator[](Eigen::Index i) const { return terms_[static_cast<std::size_t>(i)]; }
  const std::vector<ErrorTerm>& terms() const noexcept { return terms_; }
  std::size_t gaussian_count() const noexcept;
  /// At most one Gaussian term: required for identifiability of discovery.
  bool identifiable() const noexcept { return gaussian_count() <= 1; }

 private:
  std::vector<ErrorTerm> terms_;
};

struct StructuralModel {
  CoefficientMatrix b;
  ErrorSpec errors;
  // Per-variable multiplier applied to the sampled errors (e.g. the
  // rescaling produced by remove_self_loops). Empty means all ones.
  Eigen::VectorXd error_gain;

  Eigen::Index size() const noexcept { return b.size(); }
};

/// sign(z) * z^2.
inline double signed_square(double z) noexcept { return z < 0.0 ? -z * z : z * z; }

/// i.i.d. draws, variables-by-samples; variable i uses stream i of `seed`.
Dataset sample_errors(const ErrorSpec& spec, Eigen::Index n_samples, std::uint64_t seed);

/// X = (I - B)^-1 diag(gain) E.
Dataset sample_equilibrium(const StructuralModel& model, Eigen::Index n_samples,
                           std::uint64_t seed);

struct DynamicsResult {
  Eigen::MatrixXd trajectory;  // column k is the state after k updates
  Eigen::VectorXd state;
  bool converged = false;
  int steps_taken = 0;
};

inline constexpr double kFixedPointTolerance = 1e-10;
inline constexpr double kDivergenceBound = 1e12;

/// Iterates x <- B_dyn x + e from x0 (zero when omitted). Stops early once
/// successive states agree to kFixedPointTolerance in max-norm; throws
/// Diverged when the state max-norm exceeds kDivergenceBound.
DynamicsResult iterate_dynamics(const Eigen::MatrixXd& b_dyn, const Eigen::VectorXd& e,
                                int steps, std::optional<Eigen::VectorXd> x0 = std::nullopt);

}  // namespace lingd
