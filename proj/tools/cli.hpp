#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace finsler::cli {

// Exit codes of the finsler-iso tool.
enum Exit : int { kOk = 0, kViolated = 1, kUsage = 2, kNumeric = 3 };

// Runs one invocation. argv[0] is the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace finsler::cli
