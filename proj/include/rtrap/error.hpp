#pragma once

#include <stdexcept>
#include <string>

namespace rtrap {

enum class ErrorCode {
  Validation,        // bad input or configuration
  Construction,      // model could not be built (degenerate levels)
  PoleHit,           // evaluation exactly on a coupled bare level
  Diverged,          // iteration did not converge
  CollisionSuspected,
  LostRoot,
  SelfOrthogonal,    // eigenvector at an exceptional point
  NotAnEigenvalue,
  OutOfDomain,
  NoSolution,
  OracleFailure,
};

const char* to_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what);
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

// Validation problems are exit code 1 at the CLI, everything else is numeric (2).
inline bool is_validation(const Error& e) {
  return e.code() == ErrorCode::Validation || e.code() == ErrorCode::Construction;
}

}  // namespace rtrap
