#pragma once

#include <ostream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace mhgf::cli {

/// Process exit codes.
enum ExitCode : int {
    kOk = 0,            // trace explained / comparison within tolerance
    kTolerance = 1,     // comparison exceeded the tolerance
    kInconsistent = 2,  // no hypothesis explains some annotation
    kParse = 3,         // malformed or invalid domain/trace input
    kCap = 4,           // grounding enumeration cap exceeded
    kIo = 5,            // file could not be read or written
    kUsage = 64,        // bad command line
};

inline constexpr int kReportVersion = 1;

/// Runs `mhgf <args...>` (args exclude the program name). Reports go to the
/// --output file or `out`; diagnostics and logs go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace mhgf::cli
