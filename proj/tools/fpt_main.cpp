#include "fpt/config.hpp"
#include "fpt/runner.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <filesystem>
#include <iostream>

namespace {

void print_notes(const fpt::RunOutcome& outcome, bool quiet) {
    if (quiet) return;
    for (const auto& note : outcome.notes) std::cerr << "note: " << note << "\n";
}

int run_one(const std::string& config_path, const std::string& out_dir, bool quiet,
            std::optional<std::uint64_t> seed, bool compare) {
    try {
        fpt::ExperimentConfig cfg = fpt::load_config(config_path);
        if (seed) cfg.seed = *seed;
        const fpt::RunOutcome outcome = compare ? fpt::compare_schemes(cfg, out_dir)
                                                : fpt::run_experiment(cfg, out_dir);
        print_notes(outcome, quiet);
        if (!quiet)
            std::cout << cfg.name << ": exit " << outcome.exit_code
                      << (outcome.flagged ? " (flagged)" : "") << ", artifacts in " << out_dir << "\n";
        return outcome.exit_code;
    } catch (const fpt::ConfigError& e) {
        std::cerr << config_path << ": " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << config_path << ": " << e.what() << "\n";
        return 1;
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"fpt: fixed-point experiments for families of matrix seminorms"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir = "out";
    std::string suite_dir;
    bool quiet = false;
    std::optional<std::uint64_t> seed;

    auto add_common = [&](CLI::App* cmd) {
        cmd->add_flag("--quiet", quiet, "suppress progress output");
        cmd->add_option("--seed", seed, "override the config seed");
    };

    CLI::App* run = app.add_subcommand("run", "execute one experiment config");
    run->add_option("config", config_path, "path to a JSON experiment config")->required();
    run->add_option("--out", out_dir, "output directory (default: out)");
    add_common(run);

    CLI::App* suite = app.add_subcommand("suite", "execute every *.json config in a directory");
    suite->add_option("dir", suite_dir, "directory of configs")->required();
    suite->add_option("--out", out_dir, "output root (default: out)");
    add_common(suite);

    CLI::App* compare = app.add_subcommand("compare", "implicit scheme vs Krasnoselskii-Mann iteration");
    compare->add_option("config", config_path, "path to a JSON experiment config")->required();
    compare->add_option("--out", out_dir, "output directory (default: out)");
    add_common(compare);

    CLI11_PARSE(app, argc, argv);

    if (run->parsed()) return run_one(config_path, out_dir, quiet, seed, false);
    if (compare->parsed()) return run_one(config_path, out_dir, quiet, seed, true);

    // suite: one experiment per config file, processed in sorted order
    std::vector<std::filesystem::path> configs;
    for (const auto& entry : std::filesystem::directory_iterator(suite_dir))
        if (entry.is_regular_file() && entry.path().extension() == ".json") configs.push_back(entry.path());
    std::sort(configs.begin(), configs.end());
    if (configs.empty()) {
        std::cerr << suite_dir << ": no *.json configs found\n";
        return 1;
    }
    int worst = 0;
    for (const auto& path : configs) {
        const std::string out = (std::filesystem::path(out_dir) / path.stem()).string();
        worst = std::max(worst, run_one(path.string(), out, quiet, seed, false));
    }
    return worst;
}
