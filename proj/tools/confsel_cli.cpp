// confsel: run controller experiments, list presets, print benchmark values.

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "confsel/harness.hpp"
#include "confsel/oracles.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

int main(int argc, char** argv) {
    CLI::App app{"Online conformal selection controllers: experiment harness"};
    app.require_subcommand(1);

    auto* run = app.add_subcommand("run", "Run a preset or a config file and write traces, metrics and plots");
    std::string preset_name;
    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::optional<std::int64_t> replicas;
    std::size_t jobs = 1;
    bool plot = false;
    std::string out_dir;
    auto* preset_opt = run->add_option("--preset", preset_name, "Built-in preset name");
    auto* config_opt = run->add_option("--config", config_path, "JSON config file")->check(CLI::ExistingFile);
    preset_opt->excludes(config_opt);
    config_opt->excludes(preset_opt);
    run->add_option("--seed", seed, "Master seed");
    run->add_option("--replicas", replicas, "Number of replicas")->check(CLI::PositiveNumber);
    run->add_option("--jobs", jobs, "Worker threads for replicas")->check(CLI::PositiveNumber);
    run->add_flag("--plot", plot, "Also write coverage.svg and regret.svg");
    run->add_option("--out", out_dir, "Output directory");

    app.add_subcommand("list-presets", "List the built-in presets");

    auto* oracle = app.add_subcommand("oracle", "Print benchmark values for a config as JSON");
    std::string oracle_config;
    auto* oracle_cfg_opt = oracle->add_option("--config", oracle_config, "JSON config file")->check(CLI::ExistingFile);
    std::string oracle_preset;
    oracle->add_option("--preset", oracle_preset, "Built-in preset name (first variant)")->excludes(oracle_cfg_opt);

    CLI11_PARSE(app, argc, argv);

    try {
        if (app.got_subcommand("list-presets")) {
            for (const auto& p : confsel::preset_catalog()) {
                std::cout << p.name << "\t" << p.summary;
                if (p.variants.size() > 1) {
                    std::cout << " [";
                    for (std::size_t k = 0; k < p.variants.size(); ++k) {
                        std::cout << (k ? ", " : "") << p.variants[k].variant;
                    }
                    std::cout << "]";
                }
                std::cout << "\n";
            }
            return 0;
        }

        if (app.got_subcommand("oracle")) {
            confsel::ExperimentConfig cfg;
            if (!oracle_config.empty()) {
                cfg = confsel::load_config(oracle_config);
            } else if (!oracle_preset.empty()) {
                cfg = confsel::find_preset(oracle_preset).variants.front();
            } else {
                std::cerr << "oracle: --config or --preset is required\n";
                return 2;
            }
            std::cout << confsel::oracle_json(cfg).dump(2) << "\n";
            return 0;
        }

        if (preset_name.empty() && config_path.empty()) {
            std::cerr << "run: one of --preset or --config is required\n";
            return 2;
        }
        json overrides = json::object();
        if (seed) overrides["seed"] = *seed;
        if (replicas) overrides["replicas"] = *replicas;

        if (!preset_name.empty()) {
            const auto& preset = confsel::find_preset(preset_name);
            const fs::path dir = out_dir.empty() ? fs::path("runs") / preset.name : fs::path(out_dir);
            const auto dirs = confsel::run_preset(preset, dir, jobs, plot, overrides);
            for (const auto& d : dirs) std::cout << "wrote " << d.generic_string() << "\n";
            if (dirs.size() > 1) std::cout << "wrote " << (dir / "summary.json").generic_string() << "\n";
            return 0;
        }

        auto cfg = confsel::apply_overrides(confsel::load_config(config_path), overrides);
        if (!out_dir.empty()) cfg.output_dir = out_dir;
        cfg.validate();
        const auto result = confsel::run_experiment(cfg, jobs);
        confsel::write_artifacts(result, cfg.output_dir, plot);
        std::cout << "wrote " << fs::path(cfg.output_dir).generic_string() << "\n";
        return 0;
    } catch (const confsel::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const confsel::InfeasibleBenchmark& e) {
        std::cerr << "infeasible benchmark " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
