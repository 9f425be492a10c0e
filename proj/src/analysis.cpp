#include "lingd/analysis.hpp"

#include <string>

#include "lingd/error.hpp"

namespace lingd {

int structural_hamming_distance(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw Error(ErrorCode::SchemaMismatch, "matrices of different size");
  }
  int d = 0;
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      if (i != j && (a(i, j) != 0.0) != (b(i, j) != 0.0)) ++d;
  return d;
}

AnalysisReport analyze(const std::vector<CandidateRecord>& candidates, const Eigen::MatrixXd& truth) {
  if (candidates.empty()) throw Error(ErrorCode::SchemaMismatch, "candidate set is empty");
  AnalysisReport report;
  std::size_t stable_count = 0;
  bool stable_truth = false;
  for (std::size_t k = 0; k < candidates.size(); ++k) {
    const auto& c = candidates[k];
    if (c.b.rows() != truth.rows() || c.b.cols() != truth.cols()) {
      throw Error(ErrorCode::SchemaMismatch,
                  "candidate " + std::to_string(k + 1) + " has " + std::to_string(c.b.rows()) +
                      " variables, truth has " + std::to_string(truth.rows()));
    }
    CandidateComparison cmp;
    cmp.structural_distance = structural_hamming_distance(c.b, truth);
    cmp.max_coefficient_error = (c.b - truth).cwiseAbs().maxCoeff();
    cmp.stable = c.stable;
    report.candidates.push_back(cmp);

    const auto& best = report.candidates[report.best];
    if (cmp.structural_distance < best.structural_distance ||
        (cmp.structural_distance == best.structural_distance &&
         cmp.max_coefficient_error < best.max_coefficient_error)) {
      report.best = k;
    }
    if (c.stable) {
      ++stable_count;
      stable_truth = stable_truth || cmp.structural_distance == 0;
    }
  }
  report.stable_set_contains_truth = stable_truth;
  report.stability_selected_truth = stable_count == 1 && stable_truth;
  return report;
}

}  // namespace lingd
