#include "confsel/combi_acog.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace confsel {

void GainStats::observe(double gain) {
    ++plays;
    mean += (gain - mean) / static_cast<double>(plays);
}

ChainStats::ChainStats(ChainKeying keying, std::size_t n, std::int64_t horizon, double confidence_scale)
    : keying_(keying), n_(n), log_term_(0.0), confidence_scale_(confidence_scale) {
    if (n == 0) throw InvalidInput("chain statistics need at least one arm");
    if (horizon < 1) throw InvalidInput("horizon must be positive");
    if (confidence_scale < 0.0) throw InvalidInput("confidence scale must be non-negative");
    log_term_ = std::log(std::max(static_cast<double>(n) * static_cast<double>(horizon), 1.0));
}

ChainStats::Key ChainStats::key_for(std::size_t position, std::span<const std::size_t> prefix) const {
    if (keying_ == ChainKeying::PositionKeyed) {
        return Key{static_cast<std::uint32_t>(position)};
    }
    Key key(prefix.begin(), prefix.end());
    std::sort(key.begin(), key.end());
    return key;
}

double ChainStats::score(std::size_t position, std::span<const std::size_t> prefix, std::size_t arm) const {
    const auto it = table_.find(key_for(position, prefix));
    if (it == table_.end() || it->second[arm].plays == 0) {
        return std::numeric_limits<double>::infinity();
    }
    const auto& g = it->second[arm];
    return g.mean + confidence_scale_ * std::sqrt(2.0 * log_term_ / static_cast<double>(g.plays));
}

void ChainStats::record(std::size_t position, std::span<const std::size_t> prefix, std::size_t arm, double gain) {
    auto& row = table_.try_emplace(key_for(position, prefix), n_).first->second;
    row.at(arm).observe(gain);
}

void ChainStats::inject(std::size_t position, std::span<const std::size_t> prefix, std::size_t arm, double mean) {
    auto& row = table_.try_emplace(key_for(position, prefix), n_).first->second;
    row.at(arm) = GainStats{1, mean};
}

std::vector<std::size_t> select_chain(const ChainScore& score, std::size_t n, std::size_t K) {
    if (K > n) throw InvalidInput("chain budget exceeds the number of arms");
    std::vector<std::size_t> chain;
    chain.reserve(K);
    std::vector<bool> used(n, false);
    for (std::size_t k = 0; k < K; ++k) {
        double best = -std::numeric_limits<double>::infinity();
        std::size_t best_arm = n;
        for (std::size_t i = 0; i < n; ++i) {
            if (used[i]) continue;
            const double s = score(k, chain, i);
            if (best_arm == n || s > best) {
                best = s;
                best_arm = i;
            }
        }
        used[best_arm] = true;
        chain.push_back(best_arm);
    }
    return chain;
}

std::vector<std::size_t> select_chain(const ChainStats& stats, std::size_t K) {
    return select_chain(
        [&stats](std::size_t k, std::span<const std::size_t> prefix, std::size_t i) { return stats.score(k, prefix, i); },
        stats.arm_count(), K);
}

std::size_t budget_from_theta(double theta, std::size_t n) {
    const double c = std::ceil(theta);
    if (c <= 0.0) return 0;
    return std::min(n, static_cast<std::size_t>(c));
}

BudgetState BudgetState::initial(double phi, StepSchedule schedule) {
    BudgetState b;
    b.theta = ControllerState::make(0.0, phi, schedule);
    b.K = 0;
    return b;
}

std::vector<std::string> acog_extra_columns() { return {"theta_next", "negative_marginals"}; }

AcogOutcome acog_step(BudgetState& budget, ChainStats& stats, SetFunctionEnvironment& env) {
    const std::size_t n = env.ground_size();
    if (stats.arm_count() != n) throw InvalidInput("chain statistics and environment disagree on n");
    const std::size_t K = std::min(budget.K, n);
    const double theta = budget.theta.value;

    const auto chain = select_chain(stats, K);
    const auto values = env.probe(chain);

    AcogOutcome out;
    for (std::size_t k = 0; k < K; ++k) {
        const double gain = values[k + 1] - values[k];
        if (gain < 0.0) ++out.negative_marginals;
        stats.record(k, std::span<const std::size_t>(chain.data(), k), chain[k], gain);
    }
    const double reward = std::clamp(values[K], 0.0, 1.0);
    budget.theta = aci_update(budget.theta, reward);
    budget.K = budget_from_theta(budget.theta.value, n);

    TraceRecord& rec = out.record;
    rec.t = budget.theta.step_index - 1;
    rec.action = ChainAction{chain};
    rec.reward = reward;
    rec.cost = static_cast<double>(K);
    rec.state = theta;
    rec.state_next = budget.theta.value;
    rec.budget = static_cast<int>(K);
    rec.extras = {budget.theta.value, static_cast<double>(out.negative_marginals)};
    return out;
}

}  // namespace confsel
