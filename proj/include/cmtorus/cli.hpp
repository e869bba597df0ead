#pragma once

// Command-line front end. Reports go to `out` as one JSON record per line
// (or CSV / plain integers for the quadratic-form commands) and are
// byte-identical for any --jobs value; progress and wall time go to `err`.
//
// Exit codes: 0 pass, 1 usage error, 2 a check ran and failed.

#include <ostream>
#include <string>
#include <vector>

namespace cmtorus::cli {

inline constexpr const char* kVersion = "1.0.0";
inline constexpr const char* kCacheEnv = "CMTORUS_CACHE_DIR";

inline constexpr int kExitPass = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitFailure = 2;

/// args[0] is the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace cmtorus::cli
