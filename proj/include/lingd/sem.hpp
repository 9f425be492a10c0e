#pragma once

// Coefficient matrices of linear structural equation models x = Bx + e.
//
// Entry (i, j) of B is the coefficient of x_j in the equation for x_i, i.e.
// the weight of the edge j -> i. Everything here is a pure function of its
// arguments and is templated on the scalar type so that extended precision
// can be used for cross-checks.

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "lingd/error.hpp"

namespace lingd {

template <typename Scalar>
using MatrixX = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Scalar>
using VectorX = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

using Eigen::Index;

inline constexpr double kSingularTolerance = 1e-8;
inline constexpr double kStabilityMargin = 1e-6;
inline constexpr double kUnitSelfLoopTolerance = 1e-8;
inline constexpr std::size_t kMaxCycles = 10000;

namespace detail {

template <typename Derived>
void require_square(const Eigen::MatrixBase<Derived>& m, const char* what) {
  if (m.rows() != m.cols() || m.rows() == 0) {
    throw Error(ErrorCode::InvalidArgument,
                std::string(what) + " must be a non-empty square matrix, got " +
                    std::to_string(m.rows()) + "x" + std::to_string(m.cols()));
  }
}

// True when I - B is numerically singular: either |det(I - B)| or the
// smallest singular value of I - B falls below `tol`.
template <typename Derived>
bool reduced_form_is_singular(const Eigen::MatrixBase<Derived>& b, double tol) {
  using Scalar = typename Derived::Scalar;
  using std::abs;
  const MatrixX<Scalar> w = MatrixX<Scalar>::Identity(b.rows(), b.cols()) - b;
  if (abs(w.determinant()) < Scalar(tol)) return true;
  Eigen::JacobiSVD<MatrixX<Scalar>> svd(w);
  return svd.singularValues()(svd.singularValues().size() - 1) < Scalar(tol);
}

}  // namespace detail

/// Square coefficient matrix with an exactly-zero diagonal and an invertible
/// I - B. Only obtainable through validate().
template <typename Scalar>
class BasicCoefficientMatrix {
 public:
  using MatrixType = MatrixX<Scalar>;

  template <typename Derived>
  static BasicCoefficientMatrix validate(const Eigen::MatrixBase<Derived>& b,
                                         double tol = kSingularTolerance) {
    detail::require_square(b, "coefficient matrix");
    for (Index i = 0; i < b.rows(); ++i) {
      if (b(i, i) != Scalar(0)) {
        throw Error(ErrorCode::NonZeroDiagonal,
                    "self-loop on variable " + std::to_string(i + 1));
      }
    }
    if (detail::reduced_form_is_singular(b, tol)) {
      throw Error(ErrorCode::SingularReducedForm, "I - B is not invertible");
    }
    return BasicCoefficientMatrix(b);
  }

  const MatrixType& matrix() const noexcept { return b_; }
  Index size() const noexcept { return b_.rows(); }
  Scalar operator()(Index i, Index j) const { return b_(i, j); }

 private:
  explicit BasicCoefficientMatrix(MatrixType b) : b_(std::move(b)) {}
  MatrixType b_;
};

using CoefficientMatrix = BasicCoefficientMatrix<double>;

template <typename Derived>
BasicCoefficientMatrix<typename Derived::Scalar> validate(
    const Eigen::MatrixBase<Derived>& b, double tol = kSingularTolerance) {
  return BasicCoefficientMatrix<typename Derived::Scalar>::validate(b, tol);
}

/// A = (I - B)^-1, the mixing matrix expressing x in terms of e.
template <typename Derived>
MatrixX<typename Derived::Scalar> reduced_form(const Eigen::MatrixBase<Derived>& b,
                                               double tol = kSingularTolerance) {
  using Scalar = typename Derived::Scalar;
  detail::require_square(b, "coefficient matrix");
  if (detail::reduced_form_is_singular(b, tol)) {
    throw Error(ErrorCode::SingularReducedForm, "I - B is not invertible");
  }
  const Index n = b.rows();
  const MatrixX<Scalar> w = MatrixX<Scalar>::Identity(n, n) - b;
  return w.fullPivLu().solve(MatrixX<Scalar>::Identity(n, n));
}

template <typename Scalar>
MatrixX<Scalar> reduced_form(const BasicCoefficientMatrix<Scalar>& b) {
  return reduced_form(b.matrix());
}

struct CycleInfo {
  // Vertices in edge order v0 -> v1 -> ... -> v0, rotated so v0 is smallest.
  std::vector<Index> vertices;
  double product = 0.0;

  friend bool operator==(const CycleInfo&, const CycleInfo&) = default;
};

/// Every simple directed cycle of the nonzero pattern of B, sorted
/// lexicographically by vertex list. Throws CycleLimitExceeded past
/// `max_cycles`.
template <typename Derived>
std::vector<CycleInfo> find_simple_cycles(const Eigen::MatrixBase<Derived>& b,
                                          std::size_t max_cycles = kMaxCycles) {
  using Scalar = typename Derived::Scalar;
  detail::require_square(b, "coefficient matrix");
  const Index n = b.rows();

  std::vector<std::vector<Index>> successors(static_cast<std::size_t>(n));
  for (Index from = 0; from < n; ++from) {
    for (Index to = 0; to < n; ++to) {
      if (to != from && b(to, from) != Scalar(0)) {
        successors[static_cast<std::size_t>(from)].push_back(to);
      }
    }
  }

  std::vector<CycleInfo> cycles;
  std::vector<Index> path;
  std::vector<char> on_path(static_cast<std::size_t>(n), 0);

  // Cycles are rooted at their smallest vertex, so the search from `root`
  // never enters a vertex below it and each cycle is found exactly once.
  auto dfs = [&](auto&& self, Index root, Index vertex) -> void {
    for (Index next : successors[static_cast<std::size_t>(vertex)]) {
      if (next == root) {
        CycleInfo cycle;
        cycle.vertices = path;
        double product = 1.0;
        for (std::size_t k = 0; k < path.size(); ++k) {
          const Index src = path[k];
          const Index dst = path[(k + 1) % path.size()];
          product *= static_cast<double>(b(dst, src));
        }
        cycle.product = product;
        cycles.push_back(std::move(cycle));
        if (cycles.size() > max_cycles) {
          throw Error(ErrorCode::CycleLimitExceeded,
                      "more than " + std::to_string(max_cycles) + " simple cycles");
        }
      } else if (next > root && !on_path[static_cast<std::size_t>(next)]) {
        on_path[static_cast<std::size_t>(next)] = 1;
        path.push_back(next);
        self(self, root, next);
        path.pop_back();
        on_path[static_cast<std::size_t>(next)] = 0;
      }
    }
  };

  for (Index root = 0; root < n; ++root) {
    path.assign(1, root);
    on_path[static_cast<std::size_t>(root)] = 1;
    dfs(dfs, root, root);
    on_path[static_cast<std::size_t>(root)] = 0;
  }

  std::sort(cycles.begin(), cycles.end(),
            [](const CycleInfo& a, const CycleInfo& c) { return a.vertices < c.vertices; });
  return cycles;
}

template <typename Scalar>
std::vector<CycleInfo> find_simple_cycles(const BasicCoefficientMatrix<Scalar>& b,
                                          std::size_t max_cycles = kMaxCycles) {
  return find_simple_cycles(b.matrix(), max_cycles);
}

/// True iff no two simple cycles share a vertex.
///
/// Checked structurally rather than by enumerating cycles: cycles are
/// pairwise disjoint exactly when every strongly connected component is a
/// single simple cycle, i.e. each vertex on a cycle has exactly one successor
/// inside its own component.
template <typename Derived>
bool has_disjoint_cycles(const Eigen::MatrixBase<Derived>& b) {
  using Scalar = typename Derived::Scalar;
  detail::require_square(b, "coefficient matrix");
  const Index n = b.rows();

  // reach(i, j): a nonempty directed path i -> j exists.
  Eigen::Array<bool, Eigen::Dynamic, Eigen::Dynamic> reach(n, n);
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < n; ++j) reach(i, j) = (i != j) && b(j, i) != Scalar(0);
  }
  for (Index k = 0; k < n; ++k) {
    for (Index i = 0; i < n; ++i) {
      if (!reach(i, k)) continue;
      for (Index j = 0; j < n; ++j) reach(i, j) = reach(i, j) || reach(k, j);
    }
  }

  for (Index v = 0; v < n; ++v) {
    if (!reach(v, v)) continue;
    int inside = 0;
    for (Index w = 0; w < n; ++w) {
      if (w != v && b(w, v) != Scalar(0) && reach(w, v)) ++inside;
    }
    if (inside != 1) return false;
  }
  return true;
}

template <typename Scalar>
bool has_disjoint_cycles(const BasicCoefficientMatrix<Scalar>& b) {
  return has_disjoint_cycles(b.matrix());
}

struct Stability {
  double spectral_radius = 0.0;
  bool stable = false;
  // |rho - 1| within the margin: reported as not stable.
  bool marginal = false;
};

/// Spectral radius over all (complex) eigenvalues; stable iff rho < 1 - margin.
template <typename Derived>
Stability is_stable(const Eigen::MatrixBase<Derived>& b, double margin = kStabilityMargin) {
  using Scalar = typename Derived::Scalar;
  detail::require_square(b, "coefficient matrix");
  Eigen::EigenSolver<MatrixX<Scalar>> solver(b.eval(), false);
  if (solver.info() != Eigen::Success) {
    throw Error(ErrorCode::EigenSolverFailure, "eigenvalue iteration did not converge");
  }
  Stability s;
  s.spectral_radius = static_cast<double>(solver.eigenvalues().cwiseAbs().maxCoeff());
  s.stable = s.spectral_radius < 1.0 - margin;
  s.marginal = std::abs(s.spectral_radius - 1.0) <= margin;
  return s;
}

template <typename Scalar>
Stability is_stable(const BasicCoefficientMatrix<Scalar>& b, double margin = kStabilityMargin) {
  return is_stable(b.matrix(), margin);
}

template <typename Scalar>
struct SelfLoopRemoval {
  BasicCoefficientMatrix<Scalar> b;
  // 1 / (1 - b_aa): the factor by which e_a is rescaled into e'_a.
  VectorX<Scalar> error_scales;
};

/// Rewrites a dynamic coefficient matrix without self-loops: row a is divided
/// by (1 - b_aa) and its diagonal zeroed. The equilibrium x = (I - B')^-1 S e
/// equals (I - B_dyn)^-1 e for S = diag(error_scales).
template <typename Derived>
SelfLoopRemoval<typename Derived::Scalar> remove_self_loops(
    const Eigen::MatrixBase<Derived>& b_dyn, double tol = kUnitSelfLoopTolerance) {
  using Scalar = typename Derived::Scalar;
  using std::abs;
  detail::require_square(b_dyn, "dynamic coefficient matrix");
  const Index n = b_dyn.rows();
  MatrixX<Scalar> out = b_dyn;
  VectorX<Scalar> scales(n);
  for (Index a = 0; a < n; ++a) {
    const Scalar gap = Scalar(1) - b_dyn(a, a);
    if (abs(gap) < Scalar(tol)) {
      throw Error(ErrorCode::UnitSelfLoop,
                  "variable " + std::to_string(a + 1) + " has a self-loop with coefficient 1");
    }
    scales(a) = Scalar(1) / gap;
    out.row(a) *= scales(a);
    out(a, a) = Scalar(0);
  }
  return {BasicCoefficientMatrix<Scalar>::validate(out), std::move(scales)};
}

}  // namespace lingd
