#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace nowcast::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 1;
inline constexpr int kExitNumerical = 2;

/// Runs one subcommand. `args` excludes the program name. Data goes to files
/// or `out`; diagnostics go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace nowcast::cli
