#pragma once

// Comparing a discovered candidate set against a known generating model.

#include <Eigen/Dense>

#include <cstddef>
#include <vector>

namespace lingd {

struct CandidateRecord {
  Eigen::MatrixXd b;
  bool stable = false;
};

/// Number of ordered off-diagonal pairs (i, j) where exactly one of the
/// two matrices has a nonzero coefficient. A reversed edge counts twice.
int structural_hamming_distance(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b);

struct CandidateComparison {
  int structural_distance = 0;
  double max_coefficient_error = 0.0;
  bool stable = false;
};

struct AnalysisReport {
  std::vector<CandidateComparison> candidates;
  std::size_t best = 0;  // smallest distance, then smallest coefficient error
  // Exactly one candidate passed the stability filter and it has the
  // truth's structure.
  bool stability_selected_truth = false;
  bool stable_set_contains_truth = false;
};

/// Throws SchemaMismatch when sizes differ or the candidate list is empty.
AnalysisReport analyze(const std::vector<CandidateRecord>& candidates, const Eigen::MatrixXd& truth);

}  // namespace lingd
