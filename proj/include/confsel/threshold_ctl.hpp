#pragma once

#include <span>
#include <string>
#include <vector>

#include "confsel/core_control.hpp"
#include "confsel/environments.hpp"
#include "confsel/trace.hpp"

namespace confsel {

struct ThresholdConfig {
    double tau_min = 0.0;
    double tau_max = 1.0;
    double phi = 0.5;
    StepSchedule schedule{};

    double range() const noexcept { return tau_max - tau_min; }
    void validate() const;
};

/// Submit clamp(tau, tau_min, tau_max), update the raw tau with the observed
/// success bit. Trace extras: "clamped" (1 when the action sat on a bound).
TraceRecord threshold_step(ControllerState& tau, const ThresholdConfig& cfg, ThresholdEnvironment& env);

std::vector<std::string> threshold_extra_columns();

struct NewsvendorConfig {
    double demand_cap = 100.0;
    double phi = 0.9;
    StepSchedule schedule{};
    bool dynamic_carryover = false;

    void validate() const;
};

/// Order up to q_eff = min(q, D), serve y = min(a, q_eff), then
/// q += eta_t (phi a - y). Trace reward is y/a and cost is q_eff.
/// Trace extras: "demand", "fulfilled", "q_eff", "leftover".
TraceRecord newsvendor_step(ControllerState& q, const NewsvendorConfig& cfg, double demand);

std::vector<std::string> newsvendor_extra_columns();

/// sum(y) / sum(a) over a newsvendor trace.
double fill_rate(const Trace& trace);

}  // namespace confsel
