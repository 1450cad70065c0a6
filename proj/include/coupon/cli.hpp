#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "coupon/probability_vector.hpp"

namespace coupon::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitComputation = 1;
inline constexpr int kExitUsage = 2;

// Runs the command line `args` (args[0] is the program name). Normal output
// goes to `out`, warnings and diagnostics to `err`. Returns the exit status:
// 0 success, 1 computation error or failed check, 2 usage error.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

// "0.5,0.3,0.2"; throws std::invalid_argument on anything that is not a
// comma-separated list of numbers.
std::vector<double> parse_probability_list(const std::string& text);

// One number per line, or a single JSON array of numbers.
std::vector<double> read_probability_file(const std::string& path);

}  // namespace coupon::cli
