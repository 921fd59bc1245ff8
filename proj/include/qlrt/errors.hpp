#pragma once

#include <stdexcept>
#include <string>

namespace qlrt {

// Bad command line: wrong subcommand, unknown flag. CLI exit status 1.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Bad configuration or input data: unknown/missing keys, malformed CSV,
// mismatched horizons. CLI exit status 2.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Numerical-quality failure: no feasible point, degenerate variance,
// optimizer inconsistency, too many replication failures. CLI exit status 3.
struct NumericError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace qlrt
