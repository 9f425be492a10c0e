#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace lingd {

struct Provenance {
  std::string model;  // free-form description of the generating model
  std::uint64_t seed = 0;
};

/// Observations stored variables-by-samples: column t is sample t.
/// Immutable once built; all entries finite and n_samples >= n_vars.
class Dataset {
 public:
  explicit Dataset(Eigen::MatrixXd values, std::vector<std::string> names = {},
                   std::optional<Provenance> provenance = std::nullopt);

  Eigen::Index n_vars() const noexcept { return values_.rows(); }
  Eigen::Index n_samples() const noexcept { return values_.cols(); }
  const Eigen::MatrixXd& values() const noexcept { return values_; }
  const std::vector<std::string>& names() const noexcept { return names_; }
  const std::optional<Provenance>& provenance() const noexcept { return provenance_; }

 private:
  Eigen::MatrixXd values_;
  std::vector<std::string> names_;
  std::optional<Provenance> provenance_;
};

/// Default names x1..xn.
std::vector<std::string> default_names(Eigen::Index n);

}  // namespace lingd
