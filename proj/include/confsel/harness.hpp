#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "confsel/core_control.hpp"
#include "confsel/metrics.hpp"
#include "confsel/trace.hpp"

namespace confsel {

/// Config problem; line is 1-based, 0 when no source text is involved.
class ConfigError : public std::runtime_error {
public:
    ConfigError(std::size_t line, const std::string& message, std::string key = {});
    std::size_t line() const noexcept { return line_; }
    /// Config key the problem refers to, if any.
    const std::string& key() const noexcept { return key_; }

private:
    std::size_t line_;
    std::string key_;
};

/// Flat experiment description. Every key is always serialized, so the
/// written config reproduces the run on its own.
struct ExperimentConfig {
    std::string preset = "custom";
    std::string variant;
    std::string algorithm = "pd_bandit";  // pd_bandit | pd_bandit_projected | primal_threshold | newsvendor | acog_prefix | acog_position
    std::string environment = "interval";  // interval | trap | score_uniform | poisson | or
    std::int64_t T = 1000;
    double phi = 0.8;
    std::string schedule = "constant";  // constant | power_decay
    double eta = 0.01;                  // constant step, or the scale of a decaying one
    double decay_p = 0.5;
    std::int64_t index_offset = 0;
    std::uint64_t seed = 0;
    std::int64_t replicas = 1;
    std::string output_dir = "runs";

    double lambda_cap = 0.0;  // 0: c_max / (1 - phi)
    // interval world
    double delta = 0.05;
    std::string point_dist = "beta";  // beta | uniform
    double beta_a = 2.0;
    double beta_b = 5.0;
    // trap world: failure window start < t <= end
    std::int64_t trap_start = 0;
    std::int64_t trap_end = 1;
    // score world
    double tau_min = 0.0;
    double tau_max = 1.0;
    double tau_init = 0.0;
    // inventory
    double demand_before = 20.0;
    double demand_after = 50.0;
    std::int64_t shift_t = 500;
    std::int64_t demand_cap = 100;
    double q_init = 0.0;
    bool dynamic_carryover = false;
    // OR world
    std::int64_t n_arms = 20;
    double p_low = 0.05;
    double p_high = 0.30;

    StepSchedule step_schedule() const;
    void validate() const;
    nlohmann::json to_json() const;
    /// Unknown keys and type mismatches are rejected.
    static ExperimentConfig from_json(const nlohmann::json& j);
};

/// Parse JSON config text; errors carry the offending line.
ExperimentConfig parse_config(const std::string& text);
ExperimentConfig load_config(const std::filesystem::path& path);

struct Preset {
    std::string name;
    std::string summary;
    std::vector<ExperimentConfig> variants;  // one entry: written flat; several: one subdirectory each
};

const std::vector<Preset>& preset_catalog();
/// Throws ConfigError for an unknown name.
const Preset& find_preset(const std::string& name);

struct ReplicaResult {
    std::size_t index = 0;
    std::uint64_t seed = 0;
    Trace trace;
    std::vector<double> benchmark;  // per-step benchmark cost
    MetricsReport report;
    nlohmann::json summary;  // setting-specific scalars
};

/// Benchmark values for the configured environment, as JSON.
nlohmann::json oracle_json(const ExperimentConfig& cfg);

ReplicaResult run_replica(const ExperimentConfig& cfg, std::size_t index);

struct RunResult {
    ExperimentConfig config;
    std::vector<ReplicaResult> replicas;
    nlohmann::json oracle;
};

/// Runs all replicas on `jobs` worker threads. Output does not depend on jobs.
RunResult run_experiment(const ExperimentConfig& cfg, std::size_t jobs = 1);

/// CSV text: t,action,reward,cost,state,K,coverage_cum,regret_cum,regret_pos_cum,<extras>.
std::string trace_csv(const ReplicaResult& r);

/// Aggregate metrics JSON for a run (per-replica scalars plus mean and standard error).
nlohmann::json metrics_json(const RunResult& run);

/// Writes config.json, trace_<k>.csv, metrics.json and, with plot set,
/// coverage.svg and regret.svg into dir.
void write_artifacts(const RunResult& run, const std::filesystem::path& dir, bool plot);

/// Replace keys of cfg by those present in overrides (same key set as the config file).
ExperimentConfig apply_overrides(const ExperimentConfig& cfg, const nlohmann::json& overrides);

/// Runs every variant of a preset under out_dir and writes a preset-level
/// summary.json (with a log-log slope fit when the variants differ only in T).
/// Returns the per-variant directories.
std::vector<std::filesystem::path> run_preset(const Preset& preset, const std::filesystem::path& out_dir,
                                              std::size_t jobs, bool plot, const nlohmann::json& overrides = {});

/// Preset-level summary across already computed variant runs.
nlohmann::json preset_summary(const Preset& preset, const std::vector<RunResult>& runs);

}  // namespace confsel
