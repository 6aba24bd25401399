#include "varicurve/error.hpp"

namespace varicurve {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::DegenerateBasis: return "DegenerateBasis";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::NotNKPEligible: return "NotNKPEligible";
    case ErrorCode::QuadratureFailure: return "QuadratureFailure";
    case ErrorCode::EmptyCloud: return "EmptyCloud";
    case ErrorCode::StepTooCoarse: return "StepTooCoarse";
    case ErrorCode::BadShape: return "BadShape";
    case ErrorCode::JunctionPoint: return "JunctionPoint";
    case ErrorCode::TooLarge: return "TooLarge";
    case ErrorCode::OutsideGrid: return "OutsideGrid";
    case ErrorCode::BoundaryVertex: return "BoundaryVertex";
    case ErrorCode::DegenerateFace: return "DegenerateFace";
    case ErrorCode::DegenerateStar: return "DegenerateStar";
    case ErrorCode::NoValidPoints: return "NoValidPoints";
    case ErrorCode::BadData: return "BadData";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::NumericFailure: return "NumericFailure";
  }
  return "Unknown";
}

}  // namespace varicurve
