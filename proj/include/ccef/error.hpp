#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace ccef {

//! Failure categories raised by the library.
enum class Errc
{
  param_out_of_range,
  not_differentiable,
  boundary_point,
  tolerance_not_reached,
  no_closed_form,
  grid_mismatch,
  index_out_of_range,
  non_finite_input,
  empty_conditioning_set,
  unsupported_family,
  invalid_domain,
  parse_error,
  negative_variance,
};

std::string_view to_string(Errc code);

//! All library errors derive from this type; `code()` identifies the category.
class Error : public std::runtime_error
{
public:
  Error(Errc code, const std::string& what);

  Errc code() const noexcept { return code_; }

private:
  Errc code_;
};

} // namespace ccef
