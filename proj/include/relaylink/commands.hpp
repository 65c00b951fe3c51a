#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace relaylink::cli {

enum ExitCode : int {
  kOk = 0,
  kUsage = 1,
  kNonConvergence = 2,
  kSelfCheck = 3,
};

/// Entry point shared by the executable and the tests. `args` excludes the
/// program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// "start:stop:step" in dB; empty when start > stop.
std::vector<double> parse_range(const std::string& text);

/// "1..10" or "1:10" -> {1, ..., 10}.
std::vector<int> parse_int_range(const std::string& text);

/// Seed precedence: explicit flag, then RELAYLINK_SEED, then the scenario,
/// then the built-in default.
unsigned long long resolve_seed(const std::string& flag_value, bool scenario_has_seed,
                                unsigned long long scenario_seed);

}  // namespace relaylink::cli
