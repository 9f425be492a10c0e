#include "lingd/perm_search.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <queue>
#include <string>
#include <utility>

#include "lingd/error.hpp"

namespace lingd {

Permutation::Permutation(std::vector<int> mapping) : mapping_(std::move(mapping)) {
  std::vector<char> seen(mapping_.size(), 0);
  for (int r : mapping_) {
    if (r < 0 || r >= size() || seen[static_cast<std::size_t>(r)]) {
      throw Error(ErrorCode::InvalidArgument, "mapping is not a permutation");
    }
    seen[static_cast<std::size_t>(r)] = 1;
  }
}

Permutation Permutation::identity(int n) {
  std::vector<int> m(static_cast<std::size_t>(n));
  std::iota(m.begin(), m.end(), 0);
  return Permutation(std::move(m));
}

bool Permutation::is_identity() const noexcept {
  for (int i = 0; i < size(); ++i) {
    if (mapping_[static_cast<std::size_t>(i)] != i) return false;
  }
  return true;
}

Eigen::MatrixXd Permutation::apply_rows(const Eigen::MatrixXd& m) const {
  if (m.rows() != size()) throw Error(ErrorCode::InvalidArgument, "permutation size mismatch");
  Eigen::MatrixXd out(m.rows(), m.cols());
  for (int i = 0; i < size(); ++i) out.row(i) = m.row((*this)[i]);
  return out;
}

RookSearchResult constrained_n_rooks(const ZeroPattern& pattern, std::size_t max_results) {
  const int n = static_cast<int>(pattern.size());

  std::vector<int> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    return pattern.mask().row(a).count() < pattern.mask().row(b).count();
  });

  RookSearchResult result;
  std::vector<int> mapping(static_cast<std::size_t>(n), -1);
  std::vector<char> column_used(static_cast<std::size_t>(n), 0);

  auto place = [&](auto&& self, int depth) -> void {
    if (depth == n) {
      if (result.permutations.size() >= max_results) {
        throw Error(ErrorCode::PermutationLimitExceeded,
                    "more than " + std::to_string(max_results) + " admissible permutations");
      }
      result.permutations.emplace_back(mapping);
      return;
    }
    const int row = order[static_cast<std::size_t>(depth)];
    for (int col = 0; col < n; ++col) {
      if (column_used[static_cast<std::size_t>(col)] || !pattern(row, col)) continue;
      column_used[static_cast<std::size_t>(col)] = 1;
      mapping[static_cast<std::size_t>(col)] = row;
      self(self, depth + 1);
      column_used[static_cast<std::size_t>(col)] = 0;
    }
  };
  place(place, 0);

  std::sort(result.permutations.begin(), result.permutations.end());
  if (result.permutations.empty()) result.status = RookStatus::NoAdmissiblePermutation;
  return result;
}

AssignmentLoss inverse_abs_loss() {
  return [](Eigen::Index, Eigen::Index, double value) {
    return value == 0.0 ? std::numeric_limits<double>::infinity() : std::abs(1.0 / value);
  };
}

AssignmentLoss zero_probability_loss(Eigen::MatrixXd p_zero) {
  return [p = std::move(p_zero)](Eigen::Index row, Eigen::Index col, double) {
    const double q = 1.0 - p(row, col);
    return q <= 0.0 ? std::numeric_limits<double>::infinity() : -std::log(q);
  };
}

Eigen::MatrixXd assignment_costs(const Eigen::MatrixXd& w, const AssignmentLoss& loss) {
  if (w.rows() != w.cols() || w.rows() == 0) {
    throw Error(ErrorCode::InvalidArgument, "assignment needs a non-empty square matrix");
  }
  Eigen::MatrixXd c(w.rows(), w.cols());
  for (Eigen::Index r = 0; r < w.rows(); ++r)
    for (Eigen::Index col = 0; col < w.cols(); ++col) c(r, col) = loss(r, col, w(r, col));
  return c;
}

double permutation_cost(const Eigen::MatrixXd& costs, const Permutation& p) {
  double total = 0.0;
  for (int i = 0; i < p.size(); ++i) total += costs(p[i], i);
  return total;
}

std::vector<int> hungarian(const Eigen::MatrixXd& cost) {
  const int n = static_cast<int>(cost.rows());
  if (cost.cols() != n) throw Error(ErrorCode::InvalidArgument, "hungarian needs a square matrix");
  if (n == 0) return {};

  // Forbidden cells become a penalty larger than any all-finite matching.
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i < cost.size(); ++i) {
    const double v = cost.data()[i];
    if (std::isfinite(v)) {
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    } else if (std::isnan(v) || v < 0) {
      throw Error(ErrorCode::InvalidArgument, "assignment costs must be finite or +inf");
    }
  }
  if (!std::isfinite(lo)) return {};
  const double penalty = (n + 1.0) * (std::abs(hi) + std::abs(lo) + 1.0);
  auto c = [&](int i, int j) {
    const double v = cost(i, j);
    return std::isfinite(v) ? v : penalty;
  };

  // Shortest augmenting paths with row/column potentials, 1-based.
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0);
  std::vector<int> match(n + 1, 0), way(n + 1, 0);
  for (int i = 1; i <= n; ++i) {
    match[0] = i;
    int j0 = 0;
    std::vector<double> minv(n + 1, inf);
    std::vector<char> used(n + 1, 0);
    do {
      used[j0] = 1;
      const int i0 = match[j0];
      double delta = inf;
      int j1 = 0;
      for (int j = 1; j <= n; ++j) {
        if (used[j]) continue;
        const double cur = c(i0 - 1, j - 1) - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (int j = 0; j <= n; ++j) {
        if (used[j]) {
          u[match[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (match[j0] != 0);
    do {
      const int j1 = way[j0];
      match[j0] = match[j1];
      j0 = j1;
    } while (j0 != 0);
  }

  std::vector<int> col_of_row(static_cast<std::size_t>(n), -1);
  for (int j = 1; j <= n; ++j) col_of_row[static_cast<std::size_t>(match[j] - 1)] = j - 1;
  for (int i = 0; i < n; ++i) {
    if (!std::isfinite(cost(i, col_of_row[static_cast<std::size_t>(i)]))) return {};
  }
  return col_of_row;
}

namespace {

struct Subproblem {
  std::vector<std::pair<int, int>> forced;     // (row, col)
  std::vector<std::pair<int, int>> forbidden;  // (row, col)
  Permutation permutation;
  double cost = 0.0;
};

struct CostOrder {
  bool operator()(const Subproblem& a, const Subproblem& b) const {
    if (a.cost != b.cost) return a.cost > b.cost;
    return a.permutation > b.permutation;
  }
};

bool solve(const Eigen::MatrixXd& costs, Subproblem& sp) {
  const double inf = std::numeric_limits<double>::infinity();
  Eigen::MatrixXd m = costs;
  for (auto [r, c] : sp.forbidden) m(r, c) = inf;
  for (auto [r, c] : sp.forced) {
    const double keep = m(r, c);
    m.row(r).setConstant(inf);
    m.col(c).setConstant(inf);
    m(r, c) = keep;
  }
  const std::vector<int> col_of_row = hungarian(m);
  if (col_of_row.empty()) return false;
  std::vector<int> mapping(col_of_row.size());
  for (std::size_t r = 0; r < col_of_row.size(); ++r) {
    mapping[static_cast<std::size_t>(col_of_row[r])] = static_cast<int>(r);
  }
  sp.permutation = Permutation(std::move(mapping));
  sp.cost = permutation_cost(costs, sp.permutation);
  return true;
}

}  // namespace

std::vector<RankedAssignment> k_best_assignments(const Eigen::MatrixXd& w, std::size_t k,
                                                 const AssignmentLoss& loss) {
  if (k < 1) throw Error(ErrorCode::InvalidArgument, "k must be at least 1");
  const Eigen::MatrixXd costs = assignment_costs(w, loss);
  const int n = static_cast<int>(costs.rows());

  std::priority_queue<Subproblem, std::vector<Subproblem>, CostOrder> queue;
  Subproblem root;
  if (solve(costs, root)) queue.push(std::move(root));

  std::vector<RankedAssignment> out;
  while (!queue.empty()) {
    // Keep draining exact ties with the k-th cost so the lexicographic
    // tie-break below sees every tied permutation.
    if (out.size() >= k && queue.top().cost != out[k - 1].cost) break;
    Subproblem top = queue.top();
    queue.pop();
    out.push_back({top.permutation, top.cost});

    std::vector<char> fixed_col(static_cast<std::size_t>(n), 0);
    for (auto [r, c] : top.forced) fixed_col[static_cast<std::size_t>(c)] = 1;
    std::vector<std::pair<int, int>> free_pairs;
    for (int c = 0; c < n; ++c) {
      if (!fixed_col[static_cast<std::size_t>(c)]) free_pairs.emplace_back(top.permutation[c], c);
    }
    // Child t: the first t free pairs forced, pair t forbidden. The last
    // child would be infeasible (a single remaining cell), so it is skipped.
    Subproblem child;
    child.forced = top.forced;
    child.forbidden = top.forbidden;
    for (std::size_t t = 0; t + 1 < free_pairs.size(); ++t) {
      Subproblem next = child;
      next.forbidden.push_back(free_pairs[t]);
      if (solve(costs, next)) queue.push(std::move(next));
      child.forced.push_back(free_pairs[t]);
    }
  }

  std::sort(out.begin(), out.end(), [](const RankedAssignment& a, const RankedAssignment& b) {
    if (a.cost != b.cost) return a.cost < b.cost;
    return a.permutation < b.permutation;
  });
  if (out.size() > k) out.resize(k);
  return out;
}

Permutation best_assignment(const Eigen::MatrixXd& w, const AssignmentLoss& loss) {
  auto ranked = k_best_assignments(w, 1, loss);
  if (ranked.empty()) {
    throw Error(ErrorCode::NoFiniteAssignment, "every permutation places a zero on the diagonal");
  }
  return std::move(ranked.front().permutation);
}

}  // namespace lingd
