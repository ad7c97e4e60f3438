#include "confsel/bandit_pd.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace confsel {

void ArmStats::observe(double reward, double cost) {
    ++plays;
    const double inv = 1.0 / static_cast<double>(plays);
    mean_reward += (reward - mean_reward) * inv;
    mean_cost += (cost - mean_cost) * inv;
}

ConfidenceBounds ucb_bounds(const ArmStats& stats, std::size_t n, std::int64_t horizon, double c_max) {
    if (stats.plays < 1) {
        throw InvalidInput("confidence bounds need at least one play of the arm");
    }
    const double nT = static_cast<double>(n) * static_cast<double>(horizon);
    if (!(nT >= 3.0)) {
        throw InvalidInput("confidence width needs n * T >= 3");
    }
    const double width = std::sqrt(2.0 * std::log(nT) / static_cast<double>(stats.plays));
    return ConfidenceBounds{stats.mean_reward + width, stats.mean_cost - c_max * width};
}

BanditConfig BanditConfig::for_environment(const ArmEnvironment& env, double phi, std::int64_t horizon,
                                           StepSchedule schedule, DualMode mode, double lambda_cap) {
    BanditConfig cfg;
    cfg.n = env.arm_count();
    cfg.c_max = env.max_cost();
    cfg.phi = phi;
    cfg.horizon = horizon;
    cfg.lambda_cap = lambda_cap > 0.0 ? lambda_cap : env.max_cost() / (1.0 - phi);
    cfg.i_min = env.null_arm();
    cfg.i_max = env.full_arm();
    cfg.mode = mode;
    cfg.schedule = schedule;
    cfg.validate();
    return cfg;
}

void BanditConfig::validate() const {
    if (n < 1) throw InvalidInput("bandit needs at least one arm");
    if (!(c_max > 0.0)) throw InvalidInput("c_max must be positive");
    if (!(phi > 0.0 && phi < 1.0)) throw InvalidInput("phi must lie in (0, 1)");
    if (horizon < 1) throw InvalidInput("horizon must be positive");
    if (!(lambda_cap > 0.0)) throw InvalidInput("dual cap must be positive");
    if (i_min >= n || i_max >= n) throw InvalidInput("boundary arm index out of range");
    schedule.validate();
}

BanditState BanditState::initial(const BanditConfig& cfg) {
    BanditState s;
    s.dual = ControllerState::make(0.0, cfg.phi, cfg.schedule);
    s.stats.assign(cfg.n, ArmStats{});
    return s;
}

bool BanditState::initialized() const {
    return std::all_of(stats.begin(), stats.end(), [](const ArmStats& a) { return a.plays > 0; });
}

namespace {

std::size_t lagrangian_argmin(const BanditState& state, const BanditConfig& cfg) {
    const double lambda = state.dual.value;
    double best = std::numeric_limits<double>::infinity();
    std::size_t best_arm = 0;
    for (std::size_t i = 0; i < cfg.n; ++i) {
        const auto b = ucb_bounds(state.stats[i], cfg.n, cfg.horizon, cfg.c_max);
        const double score = b.cost_lcb - lambda * b.reward_ucb;
        if (score < best) {  // strict: ties keep the lowest index
            best = score;
            best_arm = i;
        }
    }
    return best_arm;
}

std::size_t first_unplayed(const BanditState& state) {
    for (std::size_t i = 0; i < state.stats.size(); ++i) {
        if (state.stats[i].plays == 0) return i;
    }
    return state.stats.size();
}

}  // namespace

std::size_t select_arm(const BanditState& state, const BanditConfig& cfg) {
    if (cfg.mode == DualMode::BoundaryRule) {
        if (state.dual.value >= cfg.lambda_cap) return cfg.i_max;
        if (state.dual.value <= 0.0) return cfg.i_min;
    }
    return lagrangian_argmin(state, cfg);
}

std::vector<std::string> bandit_extra_columns() { return {"boundary"}; }

TraceRecord bandit_step(BanditState& state, const BanditConfig& cfg, ArmEnvironment& env) {
    if (state.stats.size() != cfg.n || env.arm_count() != cfg.n) {
        throw InvalidInput("bandit state, config and environment disagree on the arm count");
    }
    const double lambda = state.dual.value;
    const bool boundary_mode = cfg.mode == DualMode::BoundaryRule;
    std::size_t arm = 0;
    bool boundary = false;

    const std::size_t unplayed = first_unplayed(state);
    if (unplayed < cfg.n) {
        // Initialization: each arm once, in index order. In boundary mode the
        // boundary arms still fire outside [0, cap) so the dual stays bounded.
        if (boundary_mode && lambda >= cfg.lambda_cap) {
            arm = cfg.i_max;
            boundary = true;
        } else if (boundary_mode && lambda < 0.0) {
            arm = cfg.i_min;
            boundary = true;
        } else {
            arm = unplayed;
        }
    } else {
        arm = select_arm(state, cfg);
        boundary = boundary_mode && (lambda >= cfg.lambda_cap || lambda <= 0.0);
    }

    const Feedback fb = env.pull(arm);
    if (!(fb.cost >= 0.0 && fb.cost <= cfg.c_max)) {
        throw std::runtime_error("environment returned cost " + std::to_string(fb.cost) + " outside [0, " +
                                 std::to_string(cfg.c_max) + "] for arm " + std::to_string(arm));
    }
    state.stats[arm].observe(fb.reward, fb.cost);
    state.dual = aci_update(state.dual, fb.reward);
    if (cfg.mode == DualMode::ProjectedBaseline) {
        state.dual.value = std::clamp(state.dual.value, 0.0, cfg.lambda_cap);
    }
    ++state.step;

    TraceRecord rec;
    rec.t = state.step;
    rec.action = ArmAction{arm};
    rec.reward = fb.reward;
    rec.cost = fb.cost;
    rec.state = lambda;
    rec.state_next = state.dual.value;
    rec.extras = {boundary ? 1.0 : 0.0};
    return rec;
}

}  // namespace confsel
