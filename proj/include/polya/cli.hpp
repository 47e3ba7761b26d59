#pragma once

#include <iosfwd>

namespace polya::cli {

inline constexpr const char* kVersion = "1.0.0";

/// Runs the command line. Exit status: 0 success, 1 usage error, 2 data or
/// model error. Primary output goes to `out`, usage text and diagnostics to
/// `err`.
int dispatch(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace polya::cli
