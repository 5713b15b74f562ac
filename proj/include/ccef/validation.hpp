#pragma once

#include "ccef/quadrature.hpp"

#include <json.hpp>

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace ccef {

struct SuiteResult
{
  std::string suite;
  bool passed = false;
  nlohmann::json report;
};

//! "representations", "bernstein-rate", "asymptotics",
//! "covariance-consistency".
const std::vector<std::string>& suite_names();

//! Runs one named suite. covariance-consistency always passes once its
//! report is produced; its printed-vs-h-kernel comparison is informational.
//! Throws InvalidDomain for an unknown suite name.
SuiteResult run_suite(std::string_view name,
                      std::uint64_t seed,
                      const QuadratureSpec& spec = {});

//! 0.05, 0.10, ..., 0.95.
std::vector<double> default_grid();

} // namespace ccef
