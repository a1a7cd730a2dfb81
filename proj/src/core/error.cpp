#include "wayfind/error.hpp"

namespace wayfind {

std::string_view error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
    case ErrorCode::kEmptyMask: return "EmptyMask";
    case ErrorCode::kGridLargerThanMask: return "GridLargerThanMask";
    case ErrorCode::kIoFailure: return "IoFailure";
    case ErrorCode::kParseError: return "ParseError";
    case ErrorCode::kSchemaVersionMismatch: return "SchemaVersionMismatch";
    case ErrorCode::kValidationFailure: return "ValidationFailure";
    case ErrorCode::kOutOfBounds: return "OutOfBounds";
    case ErrorCode::kUnknownFloor: return "UnknownFloor";
    case ErrorCode::kWouldOrphanPoiOrPortal: return "WouldOrphanPoiOrPortal";
    case ErrorCode::kDuplicatePoi: return "DuplicatePoi";
    case ErrorCode::kNodeBlocked: return "NodeBlocked";
    case ErrorCode::kStartBlocked: return "StartBlocked";
    case ErrorCode::kGoalBlocked: return "GoalBlocked";
    case ErrorCode::kNoPath: return "NoPath";
    case ErrorCode::kNonAdjacentPair: return "NonAdjacentPair";
    case ErrorCode::kInvalidReplay: return "InvalidReplay";
    case ErrorCode::kCollisionDuringReplay: return "CollisionDuringReplay";
    case ErrorCode::kNoPortalHere: return "NoPortalHere";
    case ErrorCode::kEmptyScript: return "EmptyScript";
    case ErrorCode::kTimeout: return "Timeout";
    case ErrorCode::kEndpointUnavailable: return "EndpointUnavailable";
    case ErrorCode::kMalformedResponse: return "MalformedResponse";
    case ErrorCode::kUnknownPoi: return "UnknownPoi";
    case ErrorCode::kUnknownMap: return "UnknownMap";
    case ErrorCode::kSameEndpoints: return "SameEndpoints";
    case ErrorCode::kInternal: return "Internal";
  }
  return "Internal";
}

}  // namespace wayfind
