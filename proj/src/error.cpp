#include "rtrap/error.hpp"

namespace rtrap {

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::Validation: return "validation";
    case ErrorCode::Construction: return "construction";
    case ErrorCode::PoleHit: return "pole-hit";
    case ErrorCode::Diverged: return "diverged";
    case ErrorCode::CollisionSuspected: return "collision-suspected";
    case ErrorCode::LostRoot: return "lost-root";
    case ErrorCode::SelfOrthogonal: return "self-orthogonal";
    case ErrorCode::NotAnEigenvalue: return "not-an-eigenvalue";
    case ErrorCode::OutOfDomain: return "out-of-domain";
    case ErrorCode::NoSolution: return "no-solution";
    case ErrorCode::OracleFailure: return "oracle-failure";
  }
  return "unknown";
}

Error::Error(ErrorCode code, const std::string& what)
    : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

}  // namespace rtrap
