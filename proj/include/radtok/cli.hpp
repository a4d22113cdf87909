#pragma once

#include <ostream>

namespace radtok::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInputError = 2;
inline constexpr int kExitInvariant = 3;

// Entry point of the `radtok` tool. Subcommands: train, encode, decode, stats,
// fragmentation, memory, compare, eval. Returns the process exit code.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace radtok::cli
