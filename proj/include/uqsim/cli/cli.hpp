#pragma once

#include <iosfwd>

namespace uqsim::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUser = 1;
inline constexpr int kExitNumeric = 2;

/// uqsim entry point. Summaries go to `out`; failures print one line
/// "error: <category>: <message>" to `err`. Output files are only written
/// after the analysis has succeeded, each one atomically.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace uqsim::cli
