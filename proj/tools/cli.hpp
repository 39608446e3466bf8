#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "sprec/json_io.hpp"

namespace sprec::cli {

struct RunConfig {
  std::string command;
  std::string spec_path;
  std::size_t samples = 1'000'000;
  std::uint64_t seed = 0;
  double tol = 1e-9;
  std::string output = "json";
  int grid = 512;
  std::optional<double> gamma;
  std::optional<std::string> relation;
  unsigned workers = 1;
};

enum ExitCode : int { ok = 0, schema_error = 1, inconclusive = 2, checks_failed = 3 };

struct RunResult {
  int exit_code = ok;
  /// Document for stdout (empty on error).
  std::string output;
  /// Message for stderr.
  std::string error;
};

/// Executes one command against an already parsed input document.
RunResult run(const RunConfig& config, const Json& input);

/// Reads --spec (a path, or "-" for stdin); an empty path yields {}.
Json load_input(const std::string& path);

/// Worker count: hardware concurrency, capped by SP_COPULA_THREADS.
unsigned workers_from_env();

/// Oracle differential checks; see verify.cpp.
Json run_verify(const RunConfig& config, const Json& input);

/// "%.12g", with inf/-inf/nan spelled out.
std::string format_number(double x);

}  // namespace sprec::cli
