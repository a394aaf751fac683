#pragma once

#include <stdexcept>
#include <string>

namespace fbwave {

enum class ErrorCode {
  NoBackwardRegion,   // diffusivity has no interval where D < 0
  UndefinedAllee,     // reaction rate combination makes the Allee threshold 0/0
  DomainError,        // argument outside the admissible range
  NoMaxwellPoint,     // equal-area root not bracketed
  DegenerateFold,     // coincident diffusivity roots
  NoTripleRoot,       // cubic lacks three real roots
  ManifoldEscape,     // trajectory left the window before any stop event
  DegenerateSeed,     // manifold seed offset is zero
  NoCrossing,         // required section crossing absent at this wave speed
  NoSpeedInBracket,   // speed bracket contains no sign change
  NonConvergence,     // implicit time step Newton stagnated
  NoFront,            // front threshold never crossed
  NoConvergence,      // collocation Newton diverged
  MeshOverflow,       // mesh refinement exceeded its node budget
  InvalidConfig,      // run configuration unreadable or inconsistent
};

const char* to_string(ErrorCode code) noexcept;

// Single exception type for the whole library; the code tells callers (and the
// CLI exit-status mapping) which failure class they hit.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what_arg)
      : std::runtime_error(std::string(to_string(code)) + ": " + what_arg),
        code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

// Process exit status contract: 0 success, 1 numeric failure, 2 config error.
inline int exit_code_for(ErrorCode code) noexcept {
  return code == ErrorCode::InvalidConfig ? 2 : 1;
}

inline const char* to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::NoBackwardRegion: return "NoBackwardRegion";
    case ErrorCode::UndefinedAllee: return "UndefinedAllee";
    case ErrorCode::DomainError: return "DomainError";
    case ErrorCode::NoMaxwellPoint: return "NoMaxwellPoint";
    case ErrorCode::DegenerateFold: return "DegenerateFold";
    case ErrorCode::NoTripleRoot: return "NoTripleRoot";
    case ErrorCode::ManifoldEscape: return "ManifoldEscape";
    case ErrorCode::DegenerateSeed: return "DegenerateSeed";
    case ErrorCode::NoCrossing: return "NoCrossing";
    case ErrorCode::NoSpeedInBracket: return "NoSpeedInBracket";
    case ErrorCode::NonConvergence: return "NonConvergence";
    case ErrorCode::NoFront: return "NoFront";
    case ErrorCode::NoConvergence: return "NoConvergence";
    case ErrorCode::MeshOverflow: return "MeshOverflow";
    case ErrorCode::InvalidConfig: return "InvalidConfig";
  }
  return "UnknownError";
}

}  // namespace fbwave
