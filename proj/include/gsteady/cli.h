#pragma once

// Command-line front end. Exit codes: 0 ok, 1 input or schema error,
// 2 stability failure, 3 engineering infeasible.

#include <ostream>
#include <string>
#include <vector>

namespace gsteady {

enum ExitCode : int { kExitOk = 0, kExitInput = 1, kExitStability = 2, kExitEngineering = 3 };

/// 17 significant digits, shortest exponent form, locale independent;
/// "inf", "-inf" and "nan" for non-finite values.
std::string format_double(double v);

/// Parses "a:b:steps" into evenly spaced values; a == b yields one value.
std::vector<double> parse_range(const std::string& text);

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace gsteady
