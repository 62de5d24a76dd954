/// @file config.hpp
/// JSON run configuration: parsing with typed, path-qualified error
/// messages, defaults resolution, and a canonical form whose digest ties
/// every output file back to the exact configuration that produced it.
#pragma once

#include <cstdint>
#include <string>

#include "scenarios.hpp"

namespace vfsim {

/// A fully resolved run request: what to simulate, how to integrate it,
/// and where to put the results.
struct RunConfig {
  ScenarioSpec scenario;
  IntegratorConfig integrator;
  std::string output_dir = "out";
  int snapshot_every = 100;  // field snapshot cadence, in steps
  std::uint64_t seed = 0;    // reserved for randomized initial data
};

/// Parse a JSON document into a RunConfig. Unknown keys, type mismatches
/// and out-of-range values throw ConfigParseError/ConfigValidationError
/// naming the offending key; syntax errors carry line and column.
RunConfig parse_config(const std::string& text);

/// Read and parse a configuration file. Missing or unreadable files throw
/// IoError.
RunConfig load_config_file(const std::string& path);

/// The resolved configuration as canonical JSON: sorted keys, shortest
/// round-trip numbers, output_dir omitted. Configurations that compute
/// the same thing produce identical text.
std::string canonical_config(const RunConfig& config);

/// FNV-1a 64-bit hash of the canonical form, as 16 hex digits.
std::string config_digest(const RunConfig& config);

/// A short human-readable summary (scenario kind, key parameters, digest).
std::string describe_config(const RunConfig& config);

}  // namespace vfsim
