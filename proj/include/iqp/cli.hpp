#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace iqp::cli {

/// Runs one command (args exclude the program name). Exit codes:
/// 0 success, 1 solver failure, 2 usage error (including an uncertified rho
/// without --unsafe-rho).
int dispatch(std::vector<std::string> args, std::ostream& out, std::ostream& err);

}  // namespace iqp::cli
