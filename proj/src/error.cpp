#include "ccef/error.hpp"

namespace ccef {

std::string_view to_string(Errc code)
{
  switch (code) {
    case Errc::param_out_of_range:
      return "ParamOutOfRange";
    case Errc::not_differentiable:
      return "NotDifferentiable";
    case Errc::boundary_point:
      return "BoundaryPoint";
    case Errc::tolerance_not_reached:
      return "ToleranceNotReached";
    case Errc::no_closed_form:
      return "NoClosedForm";
    case Errc::grid_mismatch:
      return "GridMismatch";
    case Errc::index_out_of_range:
      return "IndexOutOfRange";
    case Errc::non_finite_input:
      return "NonFiniteInput";
    case Errc::empty_conditioning_set:
      return "EmptyConditioningSet";
    case Errc::unsupported_family:
      return "UnsupportedFamily";
    case Errc::invalid_domain:
      return "InvalidDomain";
    case Errc::parse_error:
      return "ParseError";
    case Errc::negative_variance:
      return "NegativeVariance";
  }
  return "Unknown";
}

Error::Error(Errc code, const std::string& what)
  : std::runtime_error(std::string(to_string(code)) + ": " + what)
  , code_(code)
{}

} // namespace ccef
