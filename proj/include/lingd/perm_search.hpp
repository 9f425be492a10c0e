#pragma once

// Row-permutation search over an unmixing matrix: exhaustive enumeration of
// zeroless-diagonal permutations (constrained n-rooks) and the assignment
// based alternatives (Hungarian best assignment, Murty k-best).

#include <Eigen/Dense>

#include <compare>
#include <cstddef>
#include <functional>
#include <vector>

#include "lingd/pattern.hpp"

namespace lingd {

/// Row i of the permuted matrix is row mapping[i] of the input.
class Permutation {
 public:
  Permutation() = default;
  explicit Permutation(std::vector<int> mapping);

  static Permutation identity(int n);

  int size() const noexcept { return static_cast<int>(mapping_.size()); }
  int operator[](int i) const { return mapping_[static_cast<std::size_t>(i)]; }
  const std::vector<int>& mapping() const noexcept { return mapping_; }
  bool is_identity() const noexcept;

  /// Rows of `m` reordered so that row i is m.row(mapping[i]).
  Eigen::MatrixXd apply_rows(const Eigen::MatrixXd& m) const;

  friend bool operator==(const Permutation&, const Permutation&) = default;
  friend auto operator<=>(const Permutation&, const Permutation&) = default;

 private:
  std::vector<int> mapping_;
};

inline constexpr std::size_t kMaxPermutations = 10000;

enum class RookStatus { Ok, NoAdmissiblePermutation };

struct RookSearchResult {
  std::vector<Permutation> permutations;  // lexicographic by mapping
  RookStatus status = RookStatus::Ok;
};

/// All permutations with pattern(mapping[i], i) true for every i, found by
/// depth-first rook placement (most constrained row first). Throws
/// PermutationLimitExceeded beyond `max_results`.
RookSearchResult constrained_n_rooks(const ZeroPattern& pattern,
                                     std::size_t max_results = kMaxPermutations);

/// Cost of placing input row `row` on diagonal position `col` given the
/// entry value; +inf forbids the placement.
using AssignmentLoss = std::function<double(Eigen::Index row, Eigen::Index col, double value)>;

/// |1/x|, infinite at exact zeros.
AssignmentLoss inverse_abs_loss();
/// -log(1 - p_zero(row, col)) for a matrix of per-entry zero probabilities.
AssignmentLoss zero_probability_loss(Eigen::MatrixXd p_zero);

/// cost(r, c) = loss(r, c, w(r, c)).
Eigen::MatrixXd assignment_costs(const Eigen::MatrixXd& w, const AssignmentLoss& loss);

/// sum_i cost(mapping[i], i), accumulated in position order.
double permutation_cost(const Eigen::MatrixXd& costs, const Permutation& p);

/// Minimum-cost perfect matching of rows to columns (Kuhn-Munkres with
/// potentials). Returns col_of_row; infinite cells are treated as forbidden
/// and an empty vector is returned when no finite matching exists.
std::vector<int> hungarian(const Eigen::MatrixXd& cost);

struct RankedAssignment {
  Permutation permutation;
  double cost = 0.0;
};

/// Lowest-cost permutation; ties resolved lexicographically. Throws
/// NoFiniteAssignment when every permutation hits a forbidden entry.
Permutation best_assignment(const Eigen::MatrixXd& w, const AssignmentLoss& loss = inverse_abs_loss());

/// The k cheapest finite-cost permutations in nondecreasing cost order
/// (ties lexicographic), by Murty's partitioning with Hungarian subproblems.
std::vector<RankedAssignment> k_best_assignments(const Eigen::MatrixXd& w, std::size_t k,
                                                 const AssignmentLoss& loss = inverse_abs_loss());

}  // namespace lingd
