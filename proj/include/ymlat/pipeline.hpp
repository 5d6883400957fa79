#pragma once

// Seeded end-to-end stages: sample -> gaugefix -> norms -> scaling.
//
// Output directory layout:
//   manifest.json
//   snapshots/U_cCCC_sSSSSS.ymlf        sampled gauge fields
//   gauge/A_*.ymlf, gauge/g_*.ymlf      gauge-fixed one-forms and transforms
//   samples.csv gaugefix.csv norms.csv norms_witnesses.json
//   scaling.csv scaling_sup.csv
// Every CSV starts with a config_hash column. CSVs and snapshots depend
// only on the configuration (not on workers or output location); timings
// go to the manifest.

#include <string>
#include <vector>

#include "ymlat/config.hpp"

namespace ymlat {

enum ExitCode : int { exit_ok = 0, exit_failure = 1, exit_config = 2, exit_numeric = 3 };

struct StageResult {
    int exit_code = exit_ok;
    std::vector<std::string> files; // relative to the output directory
    std::vector<std::string> warnings;
};

StageResult cmd_sample(const ExperimentConfig& c);
StageResult cmd_gaugefix(const ExperimentConfig& c);
StageResult cmd_norms(const ExperimentConfig& c);
StageResult cmd_scaling(const ExperimentConfig& c);
StageResult cmd_all(const ExperimentConfig& c);

// Largest N1 accepted by the norm scans unless allow_large is set.
inline constexpr int norm_scan_limit = 7;

} // namespace ymlat
