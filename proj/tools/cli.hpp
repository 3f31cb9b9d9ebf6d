#pragma once

#include <ostream>

namespace subgeom::cli {

inline constexpr int kExitPass = 0;
inline constexpr int kExitFailure = 1;  // verification failed or a per-point operation failed
inline constexpr int kExitUsage = 2;    // bad flags, unreadable or malformed input

/// Entry point of the `subgeom` binary, with output streams injectable for tests.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace subgeom::cli
