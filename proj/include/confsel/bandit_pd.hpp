#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "confsel/core_control.hpp"
#include "confsel/environments.hpp"
#include "confsel/trace.hpp"

namespace confsel {

/// Per-arm running averages of observed rewards and costs.
struct ArmStats {
    std::int64_t plays = 0;
    double mean_reward = 0.0;
    double mean_cost = 0.0;

    void observe(double reward, double cost);
};

struct ConfidenceBounds {
    double reward_ucb = 0.0;
    double cost_lcb = 0.0;
};

/// Delta = sqrt(2 ln(n T) / plays); reward_ucb = mu + Delta,
/// cost_lcb = chi - c_max * Delta. Not clipped.
ConfidenceBounds ucb_bounds(const ArmStats& stats, std::size_t n, std::int64_t horizon, double c_max);

enum class DualMode {
    BoundaryRule,       // unprojected dual, boundary arms at lambda <= 0 / >= cap
    ProjectedBaseline,  // always the Lagrangian argmin, dual clipped to [0, cap]
};

struct BanditConfig {
    std::size_t n = 0;
    double c_max = 1.0;
    double phi = 0.5;
    std::int64_t horizon = 1;
    double lambda_cap = 0.0;
    std::size_t i_min = 0;
    std::size_t i_max = 0;
    DualMode mode = DualMode::BoundaryRule;
    StepSchedule schedule{};

    /// lambda_cap <= 0 selects the default c_max / (1 - phi).
    static BanditConfig for_environment(const ArmEnvironment& env, double phi, std::int64_t horizon,
                                        StepSchedule schedule, DualMode mode, double lambda_cap = 0.0);
    void validate() const;
};

struct BanditState {
    ControllerState dual;
    std::vector<ArmStats> stats;
    std::int64_t step = 0;  // completed steps

    static BanditState initial(const BanditConfig& cfg);
    bool initialized() const;
};

/// Primal selection for a state whose arms have all been played at least once.
std::size_t select_arm(const BanditState& state, const BanditConfig& cfg);

/// One round: choose, play, record the arm's statistics, update the dual.
///
/// While some arm is still unplayed the next unplayed arm (by index) is
/// chosen, except that the boundary arms take over whenever lambda < 0 or
/// lambda >= cap in BoundaryRule mode. The dual is updated on every round.
///
/// Trace extras: "boundary" (1 when the boundary rule chose the arm).
TraceRecord bandit_step(BanditState& state, const BanditConfig& cfg, ArmEnvironment& env);

std::vector<std::string> bandit_extra_columns();

}  // namespace confsel
