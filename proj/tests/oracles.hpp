#pragma once

// Brute-force reference implementations and random model generators used by
// the unit and acceptance tests. Nothing here calls into the code it checks.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <utility>
#include <vector>

#include "lingd/random.hpp"

namespace oracle {

using Eigen::Index;
using Eigen::MatrixXd;

inline std::vector<std::vector<int>> all_permutations(int n) {
  std::vector<int> p(static_cast<std::size_t>(n));
  std::iota(p.begin(), p.end(), 0);
  std::vector<std::vector<int>> out;
  do {
    out.push_back(p);
  } while (std::next_permutation(p.begin(), p.end()));
  return out;
}

/// Permutations with mask(p[i], i) true for all i, lexicographic.
template <typename Mask>
std::vector<std::vector<int>> admissible_by_filter(const Mask& mask) {
  const int n = static_cast<int>(mask.rows());
  std::vector<std::vector<int>> out;
  for (const auto& p : all_permutations(n)) {
    bool ok = true;
    for (int i = 0; i < n && ok; ++i) ok = mask(p[static_cast<std::size_t>(i)], i);
    if (ok) out.push_back(p);
  }
  return out;
}

struct Ranked {
  std::vector<int> mapping;
  double cost;
};

/// All finite-cost permutations sorted by (cost, mapping); cost summed in
/// position order.
inline std::vector<Ranked> ranked_by_enumeration(const MatrixXd& costs) {
  std::vector<Ranked> out;
  for (const auto& p : all_permutations(static_cast<int>(costs.rows()))) {
    double c = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) c += costs(p[i], static_cast<Index>(i));
    if (std::isfinite(c)) out.push_back({p, c});
  }
  std::sort(out.begin(), out.end(), [](const Ranked& a, const Ranked& b) {
    if (a.cost != b.cost) return a.cost < b.cost;
    return a.mapping < b.mapping;
  });
  return out;
}

struct Cycle {
  std::vector<Index> vertices;
  double product;
};

/// Every vertex subset of size >= 2 in every cyclic order starting at its
/// smallest vertex; keeps those whose consecutive edges are all present.
inline std::vector<Cycle> cycles_by_enumeration(const MatrixXd& b) {
  const Index n = b.rows();
  std::vector<Cycle> out;
  for (unsigned subset = 1; subset < (1u << n); ++subset) {
    std::vector<Index> verts;
    for (Index v = 0; v < n; ++v)
      if (subset & (1u << v)) verts.push_back(v);
    if (verts.size() < 2) continue;
    std::vector<Index> rest(verts.begin() + 1, verts.end());
    do {
      std::vector<Index> order{verts.front()};
      order.insert(order.end(), rest.begin(), rest.end());
      double product = 1.0;
      bool ok = true;
      for (std::size_t k = 0; k < order.size() && ok; ++k) {
        const double w = b(order[(k + 1) % order.size()], order[k]);
        ok = w != 0.0;
        product *= w;
      }
      if (ok) out.push_back({order, product});
    } while (std::next_permutation(rest.begin(), rest.end()));
  }
  std::sort(out.begin(), out.end(),
            [](const Cycle& a, const Cycle& c) { return a.vertices < c.vertices; });
  return out;
}

inline bool cycles_disjoint_by_enumeration(const MatrixXd& b) {
  const auto cycles = cycles_by_enumeration(b);
  for (std::size_t i = 0; i < cycles.size(); ++i)
    for (std::size_t j = i + 1; j < cycles.size(); ++j)
      for (Index v : cycles[i].vertices)
        if (std::find(cycles[j].vertices.begin(), cycles[j].vertices.end(), v) !=
            cycles[j].vertices.end())
          return false;
  return true;
}

/// Coefficient with magnitude in [lo, hi] and random sign.
inline double coefficient(lingd::Rng& rng, double lo, double hi) {
  const double m = lo + (hi - lo) * rng.uniform();
  return rng.uniform() < 0.5 ? -m : m;
}

/// Random DAG in a random topological order.
inline MatrixXd random_dag(int n, lingd::Rng& rng, double density = 0.5) {
  std::vector<int> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  for (int i = n - 1; i > 0; --i) std::swap(order[i], order[rng.below(static_cast<std::uint64_t>(i + 1))]);
  MatrixXd b = MatrixXd::Zero(n, n);
  for (int a = 0; a < n; ++a)
    for (int c = a + 1; c < n; ++c)
      if (rng.uniform() < density) b(order[c], order[a]) = coefficient(rng, 0.2, 1.5);
  return b;
}

/// Random model whose cycles are pairwise vertex-disjoint: vertices are
/// split into blocks (single vertices or simple cycles of length 2-3) laid
/// out in a random order, with acyclic edges only from earlier to later
/// blocks. Every cycle product has modulus in [lo, hi].
inline MatrixXd random_disjoint_cycle_model(int n, lingd::Rng& rng, double lo = 0.2,
                                            double hi = 0.9, bool force_cycle = true) {
  std::vector<int> verts(static_cast<std::size_t>(n));
  std::iota(verts.begin(), verts.end(), 0);
  for (int i = n - 1; i > 0; --i) std::swap(verts[i], verts[rng.below(static_cast<std::uint64_t>(i + 1))]);

  std::vector<std::vector<int>> blocks;
  std::size_t pos = 0;
  while (pos < verts.size()) {
    const std::size_t left = verts.size() - pos;
    std::size_t len = 1;
    const double u = rng.uniform();
    if (left >= 3 && u < 0.3) len = 3;
    else if (left >= 2 && u < 0.65) len = 2;
    if (force_cycle && blocks.empty() && left >= 2) len = left >= 3 && u < 0.5 ? 3 : 2;
    blocks.emplace_back(verts.begin() + static_cast<long>(pos), verts.begin() + static_cast<long>(pos + len));
    pos += len;
  }

  MatrixXd b = MatrixXd::Zero(n, n);
  for (const auto& blk : blocks) {
    if (blk.size() < 2) continue;
    const double target = lo + (hi - lo) * rng.uniform();
    const double per_edge = std::pow(target, 1.0 / static_cast<double>(blk.size()));
    for (std::size_t k = 0; k < blk.size(); ++k) {
      const double sign = rng.uniform() < 0.5 ? -1.0 : 1.0;
      b(blk[(k + 1) % blk.size()], blk[k]) = sign * per_edge;
    }
  }
  for (std::size_t a = 0; a < blocks.size(); ++a)
    for (std::size_t c = a + 1; c < blocks.size(); ++c)
      for (int from : blocks[a])
        for (int to : blocks[c])
          if (rng.uniform() < 0.3) b(to, from) = coefficient(rng, 0.2, 1.5);
  return b;
}

/// Random square matrix rescaled to spectral radius `rho`.
inline MatrixXd random_with_spectral_radius(int n, double rho, lingd::Rng& rng) {
  MatrixXd m(n, n);
  for (Index i = 0; i < m.size(); ++i) m.data()[i] = rng.normal();
  const double r = Eigen::EigenSolver<MatrixXd>(m, false).eigenvalues().cwiseAbs().maxCoeff();
  return m * (rho / r);
}

}  // namespace oracle
