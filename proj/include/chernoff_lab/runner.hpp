#pragma once

#include <string>

#include "chernoff_lab/config.hpp"

namespace chernoff_lab {

/// Runs the configured experiment and writes <output>.csv (machine-readable,
/// 17-significant-digit floats, LF endings) and <output>.report.txt (config
/// echo plus verdicts). Identical configs produce byte-identical CSVs.
/// Throws ConfigError for unusable configs, other exceptions on runtime
/// failures.
void run(const ExperimentConfig& cfg);

/// Catalog text for the `list` subcommand: families, functions, rates.
std::string catalog_text();

}  // namespace chernoff_lab
