#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace smp {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitVerifyFailed = 2;

inline constexpr unsigned long long kDefaultSeed = 0x9E3779B97F4A7C15ull;

/// Entry point of the `smp` tool. args[0] is the program name.
int cli_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace smp
