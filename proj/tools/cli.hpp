#pragma once

// Command-line front end. Verbs: global, local, jc, xxz, export-sdp, selftest.
// Exit codes: 0 success, 1 selftest failure, 2 input error, 3 non-convergence.

#include <ostream>
#include <string>
#include <vector>

namespace ergoloc::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitSelftest = 1;
inline constexpr int kExitInput = 2;
inline constexpr int kExitNotConverged = 3;

/// "0.4pi", "pi", "-2pi", "1.5" -> radians. Throws InvalidInput.
double parse_angle(const std::string& text);

/// "a:b:k" -> k evenly spaced points from a to b inclusive (k >= 2). The
/// endpoints accept the pi suffix.
std::vector<double> parse_sweep(const std::string& text);

/// Full double precision, locale independent.
std::string format_number(double x);

int run(int argc, char** argv, std::ostream& out, std::ostream& err);

}  // namespace ergoloc::cli
