#pragma once

#include <iosfwd>

namespace fbvp::cli {

/// Runs the command-line interface. Returns 0 on success, 1 on usage or
/// configuration errors and 2 on numerical failures.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace fbvp::cli
