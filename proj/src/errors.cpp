#include "warpgeo/errors.hpp"

namespace warpgeo {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::OutOfDomain: return "OutOfDomain";
    case ErrorCode::DegenerateMetric: return "DegenerateMetric";
    case ErrorCode::SignatureMismatch: return "SignatureMismatch";
    case ErrorCode::DegeneratePlane: return "DegeneratePlane";
    case ErrorCode::NonPositiveWarping: return "NonPositiveWarping";
    case ErrorCode::DegenerateLeaf: return "DegenerateLeaf";
    case ErrorCode::NotKilling: return "NotKilling";
    case ErrorCode::NotGeodesicKilling: return "NotGeodesicKilling";
    case ErrorCode::FiberNotOneDimensional: return "FiberNotOneDimensional";
    case ErrorCode::PotentialSingularity: return "PotentialSingularity";
    case ErrorCode::UnknownSolution: return "UnknownSolution";
    case ErrorCode::BadParams: return "BadParams";
    case ErrorCode::NotFluidForm: return "NotFluidForm";
    case ErrorCode::NotLorentzian: return "NotLorentzian";
    case ErrorCode::UnsupportedAmbient: return "UnsupportedAmbient";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::UnknownChartId: return "UnknownChartId";
    case ErrorCode::ExpressionNotDifferentiable: return "ExpressionNotDifferentiable";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

}  // namespace warpgeo
