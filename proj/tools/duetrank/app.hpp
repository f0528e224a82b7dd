#pragma once

#include <iosfwd>

namespace duetrank {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInput = 2;     // i/o, format or usage
inline constexpr int kExitNumeric = 3;
inline constexpr int kExitMismatch = 4;  // checkpoint vs vocabulary
inline constexpr int kExitInternal = 1;

// Parses argv and runs one subcommand. `seed_variable` is the value of
// DUETRANK_SEED (may be null).
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err, const char* seed_variable);

}  // namespace duetrank
