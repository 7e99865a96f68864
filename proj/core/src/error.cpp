#include "forest/error.hpp"

namespace forest {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::DuplicateNode: return "DuplicateNode";
    case ErrorCode::UnknownEndpoint: return "UnknownEndpoint";
    case ErrorCode::UnknownNode: return "UnknownNode";
    case ErrorCode::NonPositiveConductance: return "NonPositiveConductance";
    case ErrorCode::Disconnected: return "Disconnected";
    case ErrorCode::EmptyFuseSet: return "EmptyFuseSet";
    case ErrorCode::InvalidBoundary: return "InvalidBoundary";
    case ErrorCode::InvalidInjection: return "InvalidInjection";
    case ErrorCode::TooLarge: return "TooLarge";
    case ErrorCode::EmptyRootSet: return "EmptyRootSet";
    case ErrorCode::InvalidForest: return "InvalidForest";
    case ErrorCode::WalkBudgetExceeded: return "WalkBudgetExceeded";
    case ErrorCode::InvalidSampleCount: return "InvalidSampleCount";
    case ErrorCode::QTooSmall: return "QTooSmall";
    case ErrorCode::TargetIsRoot: return "TargetIsRoot";
    case ErrorCode::SameNode: return "SameNode";
    case ErrorCode::InconsistentCurrentMatrix: return "InconsistentCurrentMatrix";
    case ErrorCode::StartInR: return "StartInR";
    case ErrorCode::BadNodeRole: return "BadNodeRole";
    case ErrorCode::NotArborescence: return "NotArborescence";
    case ErrorCode::BadDistribution: return "BadDistribution";
    case ErrorCode::SingularSystem: return "SingularSystem";
  }
  return "Unknown";
}

void fail(ErrorCode code, const std::string& detail) {
  throw Error(code, std::string(to_string(code)) + ": " + detail);
}

}  // namespace forest
