// isoswarm command-line front end.
//
// Exit codes: 0 success, 2 usage or configuration error, 3 computation error.
#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace isoswarm::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitComputation = 3;

// `args` excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace isoswarm::cli
