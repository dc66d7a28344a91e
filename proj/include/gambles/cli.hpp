#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace gambles::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitValidation = 2;
inline constexpr int kExitNumericDomain = 3;

/// Runs the command line `args` (without the program name). Tabular results
/// go to `out` unless --out names a directory; diagnostics and, for runs
/// without --out, the run manifest go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace gambles::cli
