#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace hippoc {

/// Runs `hippoc <args...>` in-process. Reports go to `out`, diagnostics to
/// `err`. Returns 0 on success, 1 on a library error, 2 on a usage error.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace hippoc
