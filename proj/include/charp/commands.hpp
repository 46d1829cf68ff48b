#pragma once

#include <optional>
#include <string>

#include "charp/problem.hpp"

namespace charp {

/// Command-line overrides; flags win over [params] keys.
struct CliOverrides {
    std::optional<long long> horizon;
    std::optional<long long> mmax;
    std::optional<long long> nmax;
    std::optional<long long> bmax;
    std::optional<long long> window;
    std::optional<long long> seed;
};

struct CommandResult {
    int exit_code = 0;       // 0 ok, 2 mathematical negative, 1 usage/parse
    std::string report;      // deterministic payload (stdout / --out)
};

/// Dispatch one command against a parsed problem file.  Throws ParseError /
/// ValidationError / the library's domain errors for usage-level failures
/// (mapped to exit code 1 by the CLI).
CommandResult run_command(const std::string& command, const ProblemFile& pf, const CliOverrides& ov = {});

/// The published command set.
bool is_known_command(const std::string& command);

}  // namespace charp
