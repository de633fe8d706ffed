#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace inertol {

/// Runs the command-line tool. `args` excludes the program name. Reports go to
/// `out` (or to the --out file), diagnostics to `err`. Returns the process
/// exit status: 0 on success or PASS, 1 on a verification FAIL, and the
/// category code of `exit_code()` for errors.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace inertol
