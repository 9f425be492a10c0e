#include "lingd/pattern.hpp"

#include <string>

#include "lingd/error.hpp"

namespace lingd {

ZeroPattern::ZeroPattern(BoolMatrix mask) : mask_(std::move(mask)) {
  if (mask_.rows() != mask_.cols() || mask_.rows() == 0) {
    throw Error(ErrorCode::InvalidArgument, "zero pattern must be non-empty and square");
  }
  for (Eigen::Index i = 0; i < mask_.rows(); ++i) {
    if (!mask_.row(i).any()) {
      throw Error(ErrorCode::AllRowPruned, "row " + std::to_string(i + 1) + " has no nonzero entry");
    }
  }
}

ZeroPattern ZeroPattern::nonzeros_of(const Eigen::MatrixXd& m) {
  return ZeroPattern(m.array() != 0.0);
}

ZeroPattern ZeroPattern::full(Eigen::Index n) {
  return ZeroPattern(BoolMatrix::Constant(n, n, true));
}

ZeroPattern ZeroPattern::with_nonzero(Eigen::Index i, Eigen::Index j) const {
  BoolMatrix m = mask_;
  m(i, j) = true;
  return ZeroPattern(std::move(m));
}

}  // namespace lingd
