#pragma once

#include <filesystem>
#include <string>

#include "orbo/config.hpp"
#include "orbo/experiment.hpp"

namespace orbo {

std::string trial_csv_name(const std::string& arm_label, double rate, int trial);
std::string summary_csv_name(const std::string& arm_label, double rate);

// Writes the config snapshot, one CSV per (arm, rate, trial), one summary CSV
// per (arm, rate), a per-trial manifest with the minimum estimates, and
// MANIFEST.txt recording completeness. Reruns with the same spec produce
// byte-identical files.
void write_experiment_outputs(const std::filesystem::path& dir, const RunSpec& spec,
                              const ExperimentResult& result);

}  // namespace orbo
