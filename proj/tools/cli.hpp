#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace modvar {

// Runs one CLI invocation (without the program name). Returns the exit
// status: 0 success, 1 domain error, 2 internal consistency fault,
// 64 usage error. All output is written to `out` / `err`; given the
// same arguments and input files the bytes are identical.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace modvar
