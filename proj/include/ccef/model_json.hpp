#pragma once

#include "ccef/copula.hpp"

#include <json.hpp>

#include <string>
#include <string_view>

namespace ccef {

// Model descriptions:
//   {"family": "independence"} | {"family": "frechet_upper"}
//   {"family": "frechet_lower"} | {"family": "fgm", "theta": t}
//   {"family": "lin", "theta": t, "phi": p}
//   {"family": "polynomial", "alpha": [[a_10, a_11, ...], ...]}
//   {"family": "mixture", "components": [{"weight": w, "model": {...}}, ...]}
//   {"family": "bernstein", "order": m, "inner": {...}}

//! Parses and validates. Throws ParseError on malformed input and
//! ParamOutOfRange on constraint violations.
CopulaModel model_from_json(const nlohmann::json& j);
CopulaModel parse_model(std::string_view text);

//! Throws UnsupportedFamily for Bernstein copulas built from a bare grid.
nlohmann::json model_to_json(const CopulaModel& model);
std::string serialize_model(const CopulaModel& model);

} // namespace ccef
