#include "confsel/core_control.hpp"

#include <cmath>
#include <string>

namespace confsel {

namespace {

void check_reward(double reward) {
    if (!(reward >= 0.0 && reward <= 1.0)) {
        throw InvalidInput("reward must lie in [0, 1], got " + std::to_string(reward));
    }
}

}  // namespace

StepSchedule StepSchedule::constant(double eta) {
    StepSchedule s;
    s.kind = Kind::Constant;
    s.scale = eta;
    s.validate();
    return s;
}

StepSchedule StepSchedule::power_decay(double scale, double exponent, std::int64_t index_offset) {
    StepSchedule s;
    s.kind = Kind::PowerDecay;
    s.scale = scale;
    s.exponent = exponent;
    s.index_offset = index_offset;
    s.validate();
    return s;
}

void StepSchedule::validate() const {
    if (!(scale > 0.0) || !std::isfinite(scale)) {
        throw InvalidInput("step schedule scale must be positive");
    }
    if (kind == Kind::PowerDecay && !(exponent >= 0.0 && exponent < 1.0)) {
        throw InvalidInput("decay exponent must lie in [0, 1)");
    }
    if (index_offset < 0) {
        throw InvalidInput("step schedule index offset must be non-negative");
    }
}

double StepSchedule::at(std::int64_t t) const {
    if (t < 1) {
        throw InvalidInput("step index starts at 1");
    }
    if (kind == Kind::Constant) {
        return scale;
    }
    return scale * std::pow(static_cast<double>(t + index_offset), -exponent);
}

ControllerState ControllerState::make(double initial, double phi, StepSchedule schedule) {
    if (!(phi > 0.0 && phi < 1.0)) {
        throw InvalidInput("target phi must lie strictly inside (0, 1)");
    }
    schedule.validate();
    ControllerState s;
    s.value = initial;
    s.target_phi = phi;
    s.schedule = schedule;
    s.step_index = 1;
    s.history_anchor = initial;
    return s;
}

ControllerState aci_update(const ControllerState& state, double reward) {
    check_reward(reward);
    ControllerState next = state;
    next.value = state.value + state.current_eta() * (state.target_phi - reward);
    next.step_index = state.step_index + 1;
    return next;
}

ControllerState weighted_aci_update(const ControllerState& state, double fulfilled, double demand) {
    if (!(demand > 0.0) || !(fulfilled >= 0.0 && fulfilled <= demand)) {
        throw InvalidInput("fulfilled amount must lie in [0, demand] with positive demand");
    }
    ControllerState next = state;
    next.value = state.value + state.current_eta() * (state.target_phi * demand - fulfilled);
    next.step_index = state.step_index + 1;
    return next;
}

ValidityLedger ValidityLedger::open(std::int64_t window_start, double phi, StepSchedule schedule) {
    ValidityLedger l;
    l.window_start = window_start;
    l.target_phi = phi;
    l.eta_used = schedule;
    return l;
}

void ValidityLedger::record(double reward) {
    check_reward(reward);
    reward_sum += reward;
    ++step_count;
}

double ValidityLedger::coverage() const {
    if (step_count == 0) {
        throw InvalidInput("empty ledger has no coverage");
    }
    return reward_sum / static_cast<double>(step_count);
}

double telescoping_check(const ValidityLedger& ledger, double state_start, double state_end, double eta) {
    if (!ledger.eta_used.is_constant()) {
        throw InvalidInput("telescoping identity only holds for a constant step size");
    }
    if (ledger.step_count < 1) {
        throw InvalidInput("telescoping check needs at least one step");
    }
    const double L = static_cast<double>(ledger.step_count);
    return (ledger.reward_sum / L - ledger.target_phi) + (state_end - state_start) / (eta * L);
}

double coverage_bound(double state_range, double eta, std::int64_t window_length) {
    if (state_range < 0.0 || !(eta > 0.0) || window_length < 1) {
        throw InvalidInput("coverage bound needs range >= 0, eta > 0 and L >= 1");
    }
    return state_range / (eta * static_cast<double>(window_length));
}

}  // namespace confsel
