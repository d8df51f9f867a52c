#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace visionflow::interface {

/// Entry point of the `visionflow` command. Returns 0 on success, 1 on a
/// domain error and 2 on a usage error (after printing help).
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

/// Same, with args[0] as the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace visionflow::interface
