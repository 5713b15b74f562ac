#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace ccef::cli {

// Exit codes of the command-line front end.
inline constexpr int exit_ok = 0;
inline constexpr int exit_validation_failed = 1;
inline constexpr int exit_usage = 2;        // parse errors, malformed input
inline constexpr int exit_numeric = 3;      // quadrature / numeric failure
inline constexpr int exit_empty_support = 4;

inline constexpr const char* version = "1.0.0";

//! Parses "a:b:step" into an ascending grid strictly inside (0, 1).
std::vector<double> parse_grid(const std::string& text);

//! Runs the `ccef` command line; returns the process exit code.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

} // namespace ccef::cli
