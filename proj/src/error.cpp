#include "igaplate/error.hpp"

namespace igaplate {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::DecreasingKnots: return "DecreasingKnots";
    case ErrorCode::NotOpen: return "NotOpen";
    case ErrorCode::ExcessMultiplicity: return "ExcessMultiplicity";
    case ErrorCode::OutOfDomain: return "OutOfDomain";
    case ErrorCode::MultiplicityOverflow: return "MultiplicityOverflow";
    case ErrorCode::ReproductionFailure: return "ReproductionFailure";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::InvalidMaterial: return "InvalidMaterial";
    case ErrorCode::DegreeTooLow: return "DegreeTooLow";
    case ErrorCode::DegenerateJacobian: return "DegenerateJacobian";
    case ErrorCode::NonPositiveDiagonal: return "NonPositiveDiagonal";
    case ErrorCode::SingularShearBlock: return "SingularShearBlock";
    case ErrorCode::NonConformingInterface: return "NonConformingInterface";
    case ErrorCode::SingularMatrix: return "SingularMatrix";
    case ErrorCode::UnknownGeometry: return "UnknownGeometry";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::InvalidGeometry: return "InvalidGeometry";
    case ErrorCode::InvalidConfig: return "InvalidConfig";
  }
  return "Unknown";
}

}  // namespace igaplate
