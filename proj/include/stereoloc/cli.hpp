#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace stereoloc::cli {

/// Stable process exit codes.
enum ExitCode : int {
    kOk = 0,
    kConfig = 2,  ///< also bad command-line usage
    kIo = 3,
    kEmptyInput = 4,
    kSchema = 5,
};

/// Runs one command. `args` excludes the program name, e.g.
/// {"localize", "--config", "rig.json", "--in", "data", "--out", "est.csv"}.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace stereoloc::cli
