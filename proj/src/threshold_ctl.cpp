#include "confsel/threshold_ctl.hpp"

#include <algorithm>
#include <stdexcept>

namespace confsel {

void ThresholdConfig::validate() const {
    if (!(tau_max > tau_min)) throw InvalidInput("threshold range needs tau_max > tau_min");
    if (!(phi > 0.0 && phi < 1.0)) throw InvalidInput("phi must lie in (0, 1)");
    schedule.validate();
}

std::vector<std::string> threshold_extra_columns() { return {"clamped"}; }

TraceRecord threshold_step(ControllerState& tau, const ThresholdConfig& cfg, ThresholdEnvironment& env) {
    const double raw = tau.value;
    const double tau_eff = std::clamp(raw, cfg.tau_min, cfg.tau_max);
    const Feedback fb = env.respond(tau_eff);
    if (fb.reward != 0.0 && fb.reward != 1.0) {
        throw InvalidInput("threshold controller needs a binary success indicator");
    }
    tau = aci_update(tau, fb.reward);

    TraceRecord rec;
    rec.t = tau.step_index - 1;
    rec.action = ThresholdAction{tau_eff};
    rec.reward = fb.reward;
    rec.cost = fb.cost;
    rec.state = raw;
    rec.state_next = tau.value;
    rec.extras = {tau_eff != raw ? 1.0 : 0.0};
    return rec;
}

void NewsvendorConfig::validate() const {
    if (!(demand_cap >= 1.0)) throw InvalidInput("demand cap must be at least 1");
    if (!(phi > 0.0 && phi < 1.0)) throw InvalidInput("phi must lie in (0, 1)");
    schedule.validate();
    if (dynamic_carryover) {
        // Decaying schedules peak at t = 1; constant ones are flat.
        const double eta_max = schedule.at(1);
        if (!(eta_max < 1.0)) throw InvalidInput("carry-over mode needs every step size in (0, 1)");
    }
}

std::vector<std::string> newsvendor_extra_columns() { return {"demand", "fulfilled", "q_eff", "leftover"}; }

TraceRecord newsvendor_step(ControllerState& q, const NewsvendorConfig& cfg, double demand) {
    if (!(demand >= 1.0 && demand <= cfg.demand_cap)) {
        throw InvalidInput("demand must lie in [1, D]");
    }
    const double raw = q.value;
    const double q_eff = std::min(raw, cfg.demand_cap);
    const double fulfilled = std::clamp(q_eff, 0.0, demand);
    const double leftover = std::max(q_eff - demand, 0.0);
    q = weighted_aci_update(q, fulfilled, demand);
    if (cfg.dynamic_carryover && q.value < leftover) {
        throw std::logic_error("no-returns constraint violated: next level below carried-over stock");
    }

    TraceRecord rec;
    rec.t = q.step_index - 1;
    rec.action = InventoryAction{q_eff};
    rec.reward = fulfilled / demand;
    rec.cost = q_eff;
    rec.state = raw;
    rec.state_next = q.value;
    rec.extras = {demand, fulfilled, q_eff, leftover};
    return rec;
}

double fill_rate(const Trace& trace) {
    if (trace.empty()) throw InvalidInput("fill rate of an empty trace");
    const auto a_col = trace.extra_index("demand");
    const auto y_col = trace.extra_index("fulfilled");
    double served = 0.0;
    double demanded = 0.0;
    for (const auto& r : trace.rows) {
        demanded += r.extras[a_col];
        served += r.extras[y_col];
    }
    return served / demanded;
}

}  // namespace confsel
