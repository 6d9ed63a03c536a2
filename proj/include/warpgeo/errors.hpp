#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace warpgeo {

enum class ErrorCode {
  OutOfDomain,
  DegenerateMetric,
  SignatureMismatch,
  DegeneratePlane,
  NonPositiveWarping,
  DegenerateLeaf,
  NotKilling,
  NotGeodesicKilling,
  FiberNotOneDimensional,
  PotentialSingularity,
  UnknownSolution,
  BadParams,
  NotFluidForm,
  NotLorentzian,
  UnsupportedAmbient,
  ParseError,
  UnknownChartId,
  ExpressionNotDifferentiable,
  InvalidArgument,
};

std::string_view to_string(ErrorCode code);

// All library failures are reported through this type; callers branch on code().
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace warpgeo
