#include "lingd/dataset.hpp"

#include "lingd/error.hpp"

namespace lingd {

std::vector<std::string> default_names(Eigen::Index n) {
  std::vector<std::string> names;
  names.reserve(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) names.push_back("x" + std::to_string(i + 1));
  return names;
}

Dataset::Dataset(Eigen::MatrixXd values, std::vector<std::string> names,
                 std::optional<Provenance> provenance)
    : values_(std::move(values)), names_(std::move(names)), provenance_(std::move(provenance)) {
  if (values_.rows() == 0) throw Error(ErrorCode::InvalidArgument, "dataset has no variables");
  if (values_.cols() < values_.rows()) {
    throw Error(ErrorCode::InvalidArgument,
                "dataset needs at least as many samples as variables (" +
                    std::to_string(values_.cols()) + " < " + std::to_string(values_.rows()) + ")");
  }
  if (!values_.allFinite()) throw Error(ErrorCode::InvalidArgument, "dataset has non-finite entries");
  if (names_.empty()) names_ = default_names(values_.rows());
  if (static_cast<Eigen::Index>(names_.size()) != values_.rows()) {
    throw Error(ErrorCode::InvalidArgument, "variable name count does not match dataset rows");
  }
}

}  // namespace lingd
