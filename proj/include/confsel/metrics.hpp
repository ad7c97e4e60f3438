#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include <json.hpp>

#include "confsel/oracles.hpp"
#include "confsel/trace.hpp"

namespace confsel {

/// coverage[t-1] = (1/t) sum_{s <= t} Y_s.
std::vector<double> coverage_series(const Trace& trace);

/// Mean reward over rows with first <= t <= last (1-based, inclusive).
double coverage_window(const Trace& trace, std::int64_t first, std::int64_t last);

/// Cumulative sum of (cost_t - c_star), or of its positive part.
std::vector<double> regret_series(const Trace& trace, double c_star, bool positive_part);
/// Same with a per-step benchmark (phase-wise oracles).
std::vector<double> regret_series(const Trace& trace, std::span<const double> c_star, bool positive_part);

struct SlopeFit {
    double slope = 0.0;
    double intercept = 0.0;
    double r2 = 0.0;
    bool clipped = false;  // some regret was below 1 and raised to 1
};

/// Least squares of log(regret) on log(T).
SlopeFit sublinearity_fit(std::span<const std::pair<double, double>> end_regrets);

struct DeviationCounts {
    std::int64_t set_based = 0;
    std::int64_t order_based = 0;
};

/// Steps whose played chain differs from the greedy prefix of the same length.
DeviationCounts deviation_counter(const Trace& trace, const GreedyReport& report);
/// Per-step set-based deviation flags.
std::vector<bool> deviation_flags(const Trace& trace, const GreedyReport& report);

/// Rows whose "boundary" extra is set; 0 when the column is absent.
std::int64_t boundary_steps(const Trace& trace);

struct MetricsReport {
    std::vector<double> coverage_cum;
    double coverage_final = 0.0;
    std::vector<double> regret_cum;
    std::vector<double> regret_pos_cum;
    std::int64_t boundary_steps = 0;
    std::optional<DeviationCounts> greedy_deviation;
    std::optional<SlopeFit> slope_fit;
    double c_star = 0.0;

    /// Final scalars only; the series live in the trace CSV.
    nlohmann::json to_json() const;
};

MetricsReport build_report(const Trace& trace, std::span<const double> c_star_per_step);

nlohmann::json to_json(const SlopeFit& fit);

}  // namespace confsel
