#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "chernoff_lab/grid_kernel.hpp"

namespace chernoff_lab {

enum class ExperimentKind { rates, compare, slow, tangency, moments, subspace, linearity };

const char* kind_name(ExperimentKind kind);
ExperimentKind parse_kind(const std::string& name);  // throws ConfigError

/// One experiment run, as read from a flat JSON config file. Fields not used
/// by a kind keep their defaults and are neither required nor written.
struct ExperimentConfig {
    ExperimentKind kind = ExperimentKind::rates;
    std::string family;                  // rates, slow-ish kinds, tangency, moments, subspace
    std::vector<std::string> families;   // compare
    std::string function;                // f
    std::string function2;               // g (linearity)
    double a = 1.0;                      // diffusion coefficient for heat families
    std::vector<double> t_values{1.0};   // tangency reads these as the decreasing ts
    std::vector<std::int64_t> ns;        // default dyadic 2^4..2^12
    std::string rate;                    // w spec (slow, subspace)
    int kmax = 8;                        // moments
    int draws = 100;                     // linearity
    std::uint64_t seed = 12345;          // linearity
    std::optional<SamplingDomain> domain;  // omitted -> derived per function
    std::string output = "experiment";   // path prefix for .csv / .report.txt

    bool operator==(const ExperimentConfig&) const = default;
};

/// The default dyadic n-grid 2^4 .. 2^12.
std::vector<std::int64_t> dyadic_ns(int lo_exp = 4, int hi_exp = 12);

/// Parses and validates a JSON config. Unknown keys, missing required fields
/// and malformed values raise ConfigError naming the offending field.
ExperimentConfig parse_config(const std::string& json_text);
ExperimentConfig load_config(const std::string& path);

/// Serializes exactly the fields relevant to cfg.kind, so that
/// parse_config(serialize_config(cfg)) == cfg for validated configs.
std::string serialize_config(const ExperimentConfig& cfg);

/// A ready-to-run template config for the given kind (what `init` writes).
ExperimentConfig template_config(ExperimentKind kind);

}  // namespace chernoff_lab
