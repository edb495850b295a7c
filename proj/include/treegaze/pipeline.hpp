#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "treegaze/synth.hpp"

namespace treegaze::pipeline {

namespace fs = std::filesystem;

struct Parameters {
    double min_fixation_ms = 100.0;
    int bins = 4;
    std::size_t n_perm = 1000;
    std::size_t n_boot = 1000;
    double alpha = 0.05;
    int max_parents = 4;
    int restarts = 0;
    std::uint64_t seed = 0;
    bool standardize = true;
    double cluster_threshold = 0.0;  // <= 0: two-tailed t critical value at alpha
    std::vector<std::string> predictors{"syntactic"};
};

struct SynthConfig {
    synth::TreebankOptions treebank;
    synth::ReaderModel reader;
    std::size_t participants = 12;
    std::optional<synth::FrpOptions> frp;
};

/// Declarative run description. Relative paths resolve against the directory
/// of the config file.
struct RunConfig {
    fs::path conllu;
    fs::path fixations;
    fs::path norms;
    fs::path surprisal;
    fs::path epochs_dir;
    fs::path out_dir = "out";
    Parameters params;
    std::map<std::string, std::vector<std::size_t>> rois;
    std::optional<SynthConfig> synth;

    /// Throws ConfigError on unknown types or out-of-range parameters.
    static RunConfig from_json(const nlohmann::json& j, const fs::path& base_dir = {});
    static RunConfig load(const fs::path& file);
    nlohmann::ordered_json to_json() const;

    void validate_parameters() const;
    /// ConfigError when a required input path is unset or missing.
    void require(const fs::path& path, const char* key) const;
};

void run_transitions(const RunConfig& config);
void run_align(const RunConfig& config);
void run_features(const RunConfig& config);
void run_bayesnet(const RunConfig& config);
void run_frp(const RunConfig& config);
/// Writes synthetic inputs plus `run_config.json` pointing at them.
void run_synth(const RunConfig& config);

}  // namespace treegaze::pipeline
