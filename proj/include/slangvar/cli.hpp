#ifndef SLANGVAR_CLI_HPP
#define SLANGVAR_CLI_HPP

#include <string>
#include <vector>

namespace slangvar {

// Runs one CLI invocation (argv without the program name).
// Exit codes: 0 success, 1 configuration error, 2 data error.
// Diagnostics go to stderr; results to stdout or the --out path.
int dispatch(const std::vector<std::string>& args);

}  // namespace slangvar

#endif
