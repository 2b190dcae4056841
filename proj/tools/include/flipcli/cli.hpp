#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace flipcli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 1;
inline constexpr int kExitRuntime = 2;

// Runs the command line; args excludes the program name. Results go to `out`
// unless --out names a file; diagnostics and usage go to `err`.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace flipcli
