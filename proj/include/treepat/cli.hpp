#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace treepat {

/// Runs one `treepat` invocation (args excludes the program name). Writes
/// results to `out` or the --out file and diagnostics to `err`. Returns 0 on
/// success, 1 on usage or validation failure, 2 when a size guard refuses.
int runCommand(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace treepat
