#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "orbo/experiment.hpp"

namespace orbo {

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// A fully resolved run declaration: the experiment plus where to put outputs.
struct RunSpec {
    ExperimentConfig experiment;
    std::string output_dir = "runs";
};

// Strict parse: unknown keys anywhere are rejected, every omitted key takes
// its documented default.
RunSpec parse_run_spec(const nlohmann::json& doc);

// The fully materialized form of a spec; parsing the snapshot reproduces the
// run exactly.
nlohmann::json snapshot_run_spec(const RunSpec& spec);

// Load a config file and apply dotted key=value overrides (values parsed as
// JSON, bare words as strings). Throws ConfigError with line information on
// parse failures and key paths on schema violations.
RunSpec load_run_spec(const std::string& path, const std::vector<std::string>& overrides);

}  // namespace orbo
