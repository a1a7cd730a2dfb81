#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace wayfind {

enum class ErrorCode {
  kInvalidArgument,
  kEmptyMask,
  kGridLargerThanMask,
  kIoFailure,
  kParseError,
  kSchemaVersionMismatch,
  kValidationFailure,
  kOutOfBounds,
  kUnknownFloor,
  kWouldOrphanPoiOrPortal,
  kDuplicatePoi,
  kNodeBlocked,
  kStartBlocked,
  kGoalBlocked,
  kNoPath,
  kNonAdjacentPair,
  kInvalidReplay,
  kCollisionDuringReplay,
  kNoPortalHere,
  kEmptyScript,
  kTimeout,
  kEndpointUnavailable,
  kMalformedResponse,
  kUnknownPoi,
  kUnknownMap,
  kSameEndpoints,
  kInternal,
};

// Stable identifier used in protocol documents and CLI output, e.g. "NoPath".
std::string_view error_code_name(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace wayfind
