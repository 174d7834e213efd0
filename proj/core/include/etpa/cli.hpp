#pragma once

#include <string>
#include <vector>

namespace etpa {

/// Full command-line surface of the tool: subcommands simulate,
/// analyze, roundtrip and demo. Returns the process exit code:
/// 0 success, 1 runtime/data error, 2 usage error.
int run_cli(int argc, const char* const* argv);

/// Same, for in-process callers; args excludes the program name.
int run_cli(std::vector<std::string> args);

}  // namespace etpa
