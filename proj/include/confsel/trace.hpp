#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <variant>
#include <vector>

namespace confsel {

struct ArmAction {
    std::size_t arm = 0;
};
struct ThresholdAction {
    double tau_eff = 0.0;
};
struct InventoryAction {
    double q_eff = 0.0;
};
struct ChainAction {
    std::vector<std::size_t> arms;
};

using Action = std::variant<ArmAction, ThresholdAction, InventoryAction, ChainAction>;

/// Compact serialization: arm id, 17-digit real, or chain ids joined by '-'.
std::string describe(const Action& action);

/// One algorithm step. `state` is the controlled value before the update and
/// `state_next` the value after it.
struct TraceRecord {
    std::int64_t t = 0;
    Action action{};
    double reward = 0.0;
    double cost = 0.0;
    double state = 0.0;
    double state_next = 0.0;
    int budget = -1;  // K_t for chain algorithms, -1 otherwise
    std::vector<double> extras;
};

struct Trace {
    std::vector<std::string> extra_columns;
    std::vector<TraceRecord> rows;

    bool empty() const noexcept { return rows.empty(); }
    std::size_t size() const noexcept { return rows.size(); }
    std::size_t extra_index(const std::string& name) const;
    double extra(std::size_t row, const std::string& name) const;
};

std::string format_real(double x);

}  // namespace confsel
