#pragma once

// Command-line front end. Exit codes: 0 ok, 1 configuration error,
// 2 domain or rejection (non-SD, infinite log-moment, unsupported
// representation), 3 convergence failure, 4 `verify` found failing criteria.
// Errors are also reported as one JSON object on stderr.

#include <ostream>
#include <string>
#include <vector>

namespace freelevy {

/// args excludes the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace freelevy
