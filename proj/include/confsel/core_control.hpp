#pragma once

#include <cstdint>
#include <stdexcept>

namespace confsel {

class InvalidInput : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Step-size schedule for the ACI update.
///
/// Constant:   eta_t = scale
/// PowerDecay: eta_t = scale * (t + index_offset)^(-exponent), t >= 1
struct StepSchedule {
    enum class Kind { Constant, PowerDecay };

    Kind kind = Kind::Constant;
    double scale = 0.01;
    double exponent = 0.0;
    std::int64_t index_offset = 0;

    static StepSchedule constant(double eta);
    static StepSchedule power_decay(double scale, double exponent, std::int64_t index_offset = 0);

    bool is_constant() const noexcept { return kind == Kind::Constant; }
    double at(std::int64_t t) const;
    void validate() const;
};

/// The scalar the ACI rule drives: a dual, a threshold, a budget or an
/// inventory level. The value is never projected here.
struct ControllerState {
    double value = 0.0;
    double target_phi = 0.5;
    StepSchedule schedule{};
    std::int64_t step_index = 1;
    double history_anchor = 0.0;

    static ControllerState make(double initial, double phi, StepSchedule schedule);
    double current_eta() const { return schedule.at(step_index); }
};

/// value += eta_t * (phi - reward); reward must lie in [0, 1].
ControllerState aci_update(const ControllerState& state, double reward);

/// value += eta_t * (phi * demand - fulfilled); the service-level form of the
/// update used by the inventory controller. Requires 0 <= fulfilled <= demand.
ControllerState weighted_aci_update(const ControllerState& state, double fulfilled, double demand);

/// Running sum of rewards over a window, for the exact coverage identity.
struct ValidityLedger {
    std::int64_t window_start = 1;
    double reward_sum = 0.0;
    std::int64_t step_count = 0;
    double target_phi = 0.5;
    StepSchedule eta_used{};

    static ValidityLedger open(std::int64_t window_start, double phi, StepSchedule schedule);
    void record(double reward);
    double coverage() const;
};

/// Residual of (mean reward - phi) + (end - start)/(eta * L). Zero up to
/// rounding for any run driven by aci_update with constant eta.
double telescoping_check(const ValidityLedger& ledger, double state_start, double state_end, double eta);

/// Worst-case deviation of windowed coverage from phi: range / (eta * L).
double coverage_bound(double state_range, double eta, std::int64_t window_length);

}  // namespace confsel
