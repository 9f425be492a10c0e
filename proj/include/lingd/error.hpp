#pragma once

#include <stdexcept>
#include <string>

namespace lingd {

enum class ErrorCode {
  InvalidArgument,
  NonZeroDiagonal,
  SingularReducedForm,
  UnitSelfLoop,
  EigenSolverFailure,
  CycleLimitExceeded,
  Diverged,
  RankDeficient,
  AllRowPruned,
  AlignmentFailure,
  NoAdmissiblePermutation,
  PermutationLimitExceeded,
  NoFiniteAssignment,
  ZeroDiagonalAfterPermute,
  ParseError,
  SchemaMismatch,
  Io,
};

const char* to_string(ErrorCode code) noexcept;

// Every failure raised by the library carries one of the codes above so that
// callers (the CLI in particular) can map it onto a stable exit status.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message),
        code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace lingd
