#pragma once

// Experiment configuration: a key = value text format with '#' comments
// and comma-separated lists.

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace ymlat {

struct ExperimentConfig {
    std::string group = "su2"; // u1 | su2
    std::string action = "villain";
    int N0 = 2;
    int N1 = 4;
    std::uint64_t seed = 1;
    int chains = 1;
    int samples = 4;
    int burnin = -1; // -1: scale-dependent default
    int thin = -1;
    double proposal_sigma = 0.0;
    int truncation = 4096;
    std::vector<double> alpha{0.4};
    std::vector<double> q{3.0};
    std::vector<double> beta{2.0};
    double threshold = 0.5;     // initial-bound warning level
    int max_area = 16;          // largest rectangle (in plaquettes) in the scaling scan
    int hoelder_samples = 10000;
    bool allow_large = false;   // lift the N1 <= 7 guard for norm scans
    int workers = 1;
    std::string output = "out";

    friend bool operator==(const ExperimentConfig&, const ExperimentConfig&) = default;
};

// Sets one key from its text form; throws ConfigError.
void set_config_value(ExperimentConfig& c, std::string_view key, std::string_view value);

// Errors carry "<source>:<line>: " prefixes.
ExperimentConfig parse_config(std::string_view text, const std::string& source = "<config>");
ExperimentConfig load_config(const std::filesystem::path& p);

// Canonical text form; parse_config(to_text(c)) == c.
std::string to_text(const ExperimentConfig& c);

// Checks ranges and cross-key constraints; throws ConfigError.
void validate(const ExperimentConfig& c);

// FNV-1a of the canonical text without the output directory and the
// worker count, neither of which changes any result. 16 hex digits.
std::string config_hash(const ExperimentConfig& c);

// Output directory, prefixed by $YMLAT_OUTPUT_ROOT when it is relative.
std::filesystem::path output_directory(const ExperimentConfig& c);

std::vector<std::string> config_keys();

} // namespace ymlat
