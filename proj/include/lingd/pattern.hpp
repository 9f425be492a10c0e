#pragma once

#include <Eigen/Dense>

namespace lingd {

using BoolMatrix = Eigen::Array<bool, Eigen::Dynamic, Eigen::Dynamic>;

/// Which entries of an unmixing matrix are treated as nonzero (true).
/// Square, and every row keeps at least one nonzero entry.
class ZeroPattern {
 public:
  explicit ZeroPattern(BoolMatrix mask);

  /// Exact nonzero pattern of `m`.
  static ZeroPattern nonzeros_of(const Eigen::MatrixXd& m);
  static ZeroPattern full(Eigen::Index n);

  Eigen::Index size() const noexcept { return mask_.rows(); }
  bool operator()(Eigen::Index i, Eigen::Index j) const { return mask_(i, j); }
  const BoolMatrix& mask() const noexcept { return mask_; }
  Eigen::Index nonzero_count() const { return mask_.count(); }

  /// Copy with (i, j) marked nonzero.
  ZeroPattern with_nonzero(Eigen::Index i, Eigen::Index j) const;

  friend bool operator==(const ZeroPattern& a, const ZeroPattern& b) {
    return a.size() == b.size() && (a.mask_ == b.mask_).all();
  }

 private:
  BoolMatrix mask_;
};

}  // namespace lingd
