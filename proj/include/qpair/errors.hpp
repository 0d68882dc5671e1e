#pragma once

#include <stdexcept>
#include <string>

namespace qpair {

// Configuration / usage problems: bad CLI arguments, malformed or
// inconsistent config documents. Mapped to exit code 2 by the CLI.
struct config_error : std::invalid_argument {
  explicit config_error(const std::string& msg) : std::invalid_argument(msg) {}
};

// Physics integrity failures: positivity violations, self-check oracle
// mismatches, integrator accuracy failures. Mapped to exit code 3.
struct integrity_error : std::runtime_error {
  explicit integrity_error(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace qpair
