#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace yardstick {

/// Entry point of the `yardstick` command. `args` excludes the program
/// name. Returns the process exit code; errors are reported on `err` as a
/// single line `ERROR:<code>: <message>`.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace yardstick
