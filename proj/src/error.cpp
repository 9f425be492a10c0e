#include "lingd/error.hpp"

namespace lingd {

const char* to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::NonZeroDiagonal: return "NonZeroDiagonal";
    case ErrorCode::SingularReducedForm: return "SingularReducedForm";
    case ErrorCode::UnitSelfLoop: return "UnitSelfLoop";
    case ErrorCode::EigenSolverFailure: return "EigenSolverFailure";
    case ErrorCode::CycleLimitExceeded: return "CycleLimitExceeded";
    case ErrorCode::Diverged: return "Diverged";
    case ErrorCode::RankDeficient: return "RankDeficient";
    case ErrorCode::AllRowPruned: return "AllRowPruned";
    case ErrorCode::AlignmentFailure: return "AlignmentFailure";
    case ErrorCode::NoAdmissiblePermutation: return "NoAdmissiblePermutation";
    case ErrorCode::PermutationLimitExceeded: return "PermutationLimitExceeded";
    case ErrorCode::NoFiniteAssignment: return "NoFiniteAssignment";
    case ErrorCode::ZeroDiagonalAfterPermute: return "ZeroDiagonalAfterPermute";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::SchemaMismatch: return "SchemaMismatch";
    case ErrorCode::Io: return "Io";
  }
  return "Unknown";
}

}  // namespace lingd
