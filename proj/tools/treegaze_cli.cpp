// treegaze command-line driver.
//
//   treegaze <command> --config run.json [--seed N] [--out DIR]
//
// Exit status: 0 success, 1 data or validation error, 2 configuration error.
// On failure a FAILED file describing the error is written into the output
// directory; a successful run removes any stale marker.

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>

#include "treegaze/error.hpp"
#include "treegaze/pipeline.hpp"

namespace fs = std::filesystem;
using namespace treegaze;

namespace {

constexpr int kExitData = 1;
constexpr int kExitConfig = 2;

void write_marker(const fs::path& out_dir, const std::string& command, const std::string& message) {
    std::error_code ec;
    fs::create_directories(out_dir, ec);
    std::ofstream f(out_dir / "FAILED");
    if (f) f << command << ": " << message << '\n';
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Syntactic-structure analyses of eye-tracking and fixation-related potential data"};
    app.require_subcommand(1, 1);

    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::string out_dir;

    using Runner = std::function<void(const pipeline::RunConfig&)>;
    const std::vector<std::tuple<std::string, std::string, Runner>> commands = {
        {"transitions", "Head/non-head transition distributions vs. baseline", pipeline::run_transitions},
        {"align", "Gaze-path to text-order edit distances", pipeline::run_align},
        {"features", "Sentence feature table and correlations", pipeline::run_features},
        {"bayesnet", "Structure learning and arc strength over sentence features", pipeline::run_bayesnet},
        {"frp", "Time-resolved regression, cluster permutation and ROI statistics", pipeline::run_frp},
        {"synth", "Write a synthetic dataset and matching run config", pipeline::run_synth},
    };
    for (const auto& [name, help, _] : commands) {
        auto* sub = app.add_subcommand(name, help);
        sub->add_option("--config", config_path, "run configuration (JSON)")->check(CLI::ExistingFile);
        sub->add_option("--seed", seed, "master seed (overrides parameters.seed)");
        sub->add_option("--out", out_dir, "output directory (overrides out_dir)");
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : kExitConfig;
    }

    const auto* sub = app.get_subcommands().front();
    const std::string command = sub->get_name();
    // Until the config is loaded, fall back to where its default out_dir would be.
    fs::path marker_dir = !out_dir.empty()       ? fs::path(out_dir)
                          : !config_path.empty() ? fs::path(config_path).parent_path() / "out"
                                                 : fs::path("out");

    try {
        pipeline::RunConfig config;
        if (!config_path.empty()) {
            config = pipeline::RunConfig::load(config_path);
        } else if (command == "synth") {
            config.synth = pipeline::SynthConfig{};
        } else {
            throw ConfigError("--config is required for '" + command + "'");
        }
        if (seed) config.params.seed = *seed;
        if (!out_dir.empty()) config.out_dir = out_dir;
        marker_dir = config.out_dir;
        config.validate_parameters();

        std::error_code ec;
        fs::remove(config.out_dir / "FAILED", ec);
        for (const auto& [name, _, run] : commands)
            if (name == command) run(config);
        return 0;
    } catch (const ConfigError& e) {
        std::cerr << "treegaze " << command << ": configuration error: " << e.what() << '\n';
        write_marker(marker_dir, command, std::string("configuration error: ") + e.what());
        return kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << "treegaze " << command << ": error: " << e.what() << '\n';
        write_marker(marker_dir, command, e.what());
        return kExitData;
    }
}
