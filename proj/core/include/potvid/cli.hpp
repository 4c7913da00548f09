#pragma once

#include <iostream>
#include <string>
#include <vector>

namespace potvid {

// Runs one command-line invocation, program name excluded. Normal output
// goes to `out`, diagnostics to `err`. Returns the process exit code:
// 0 success, 1 usage or configuration error, 2 data or format error.
int cli_dispatch(std::vector<std::string> args, std::ostream& out = std::cout,
                 std::ostream& err = std::cerr);

}  // namespace potvid
