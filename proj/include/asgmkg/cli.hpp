#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace asgmkg {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitUsage = 2;

// Entry point of the `asgmkg` command. Errors are written to `err` as one
// JSON object.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int run_cli(int argc, char** argv, std::ostream& out, std::ostream& err);

}  // namespace asgmkg
