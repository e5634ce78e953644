#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "obtuse_walks/io.hpp"

namespace obtuse_walks::cli {

enum ExitCode : int {
  kOk = 0,
  kSemanticFailure = 1,
  kMalformed = 2,
  kResourceGuard = 3,
};

/// Runs one command line (args[0] is the program name). The JSON report goes
/// to `out`, diagnostics and usage text to `err`.
int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// End-to-end N = 1 reproduction: Bernoulli obtuse system, random W_0, W_1 on
/// C^2, U by the generic and the closed-form constructions, detection,
/// simulation and path-basis verification over `steps` sites. Returns the
/// report body (checks + results); throws DomainError for p outside (0,1).
io::Json pipeline_demo(double p, std::uint64_t seed, int steps = 4);

}  // namespace obtuse_walks::cli
