#pragma once

#include <stdexcept>
#include <string>

namespace isolab {

enum class errc {
  malformed_spec,
  geometry_violation,
  not_totally_geodesic,
  seam_pole,
  out_of_domain,
  out_of_range,
  negative_area,
  hypothesis_failure,
  precondition_not_rigid,
  ill_conditioned_fit,
  no_bracket,
  domain_escape,
  step_limit,
  stiffness_failure,
  numerical_failure,
};

// Single exception type carrying a machine-readable code; the CLI maps
// codes onto its exit-code contract.
class Error : public std::runtime_error {
 public:
  Error(errc code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  errc code() const noexcept { return code_; }

 private:
  errc code_;
};

inline const char* errc_name(errc c) {
  switch (c) {
    case errc::malformed_spec: return "MalformedSpec";
    case errc::geometry_violation: return "GeometryViolation";
    case errc::not_totally_geodesic: return "NotTotallyGeodesic";
    case errc::seam_pole: return "SeamPole";
    case errc::out_of_domain: return "OutOfDomain";
    case errc::out_of_range: return "OutOfRange";
    case errc::negative_area: return "NegativeArea";
    case errc::hypothesis_failure: return "HypothesisFailure";
    case errc::precondition_not_rigid: return "PreconditionNotRigid";
    case errc::ill_conditioned_fit: return "IllConditionedFit";
    case errc::no_bracket: return "NoBracket";
    case errc::domain_escape: return "DomainEscape";
    case errc::step_limit: return "StepLimit";
    case errc::stiffness_failure: return "StiffnessFailure";
    case errc::numerical_failure: return "NumericalFailure";
  }
  return "UnknownError";
}

}  // namespace isolab
