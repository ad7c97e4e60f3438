#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "confsel/core_control.hpp"
#include "confsel/environments.hpp"
#include "confsel/trace.hpp"

namespace confsel {

enum class ChainKeying {
    PrefixKeyed,    // statistics conditioned on the exact prefix set (OG-UCB)
    PositionKeyed,  // statistics per (position, arm), prefix ignored (ranked bandits)
};

/// Running mean of marginal gains for one (context, arm) pair.
struct GainStats {
    std::int64_t plays = 0;
    double mean = 0.0;

    void observe(double gain);
};

/// Expert-chain statistics. A context is either the sorted prefix or the
/// 0-based position, depending on the keying.
class ChainStats {
public:
    /// confidence_scale multiplies the sqrt(2 ln(nT)/plays) width; 0 gives
    /// exact-mean scoring for oracle injection.
    ChainStats(ChainKeying keying, std::size_t n, std::int64_t horizon, double confidence_scale = 1.0);

    ChainKeying keying() const noexcept { return keying_; }
    std::size_t arm_count() const noexcept { return n_; }

    /// U_i(prefix): mean + width, or +infinity for an unplayed triple.
    double score(std::size_t position, std::span<const std::size_t> prefix, std::size_t arm) const;
    void record(std::size_t position, std::span<const std::size_t> prefix, std::size_t arm, double gain);
    /// Overwrite the mean of one triple, marking it as played once.
    void inject(std::size_t position, std::span<const std::size_t> prefix, std::size_t arm, double mean);

    std::size_t context_count() const noexcept { return table_.size(); }

private:
    using Key = std::vector<std::uint32_t>;
    Key key_for(std::size_t position, std::span<const std::size_t> prefix) const;

    ChainKeying keying_;
    std::size_t n_;
    double log_term_;
    double confidence_scale_;
    std::map<Key, std::vector<GainStats>> table_;
};

/// Greedy chain of length K: i_k = argmax over unchosen arms of the score,
/// ties (including +infinity ties) to the lowest index.
using ChainScore = std::function<double(std::size_t position, std::span<const std::size_t> prefix, std::size_t arm)>;
std::vector<std::size_t> select_chain(const ChainScore& score, std::size_t n, std::size_t K);
std::vector<std::size_t> select_chain(const ChainStats& stats, std::size_t K);

/// K = min(n, ceil(theta)), never below 0.
std::size_t budget_from_theta(double theta, std::size_t n);

struct BudgetState {
    ControllerState theta;
    std::size_t K = 0;

    static BudgetState initial(double phi, StepSchedule schedule);
};

struct AcogOutcome {
    TraceRecord record;
    std::size_t negative_marginals = 0;
};

/// Play the K-chain, update each expert with its marginal gain, apply the
/// ACI update to theta with Y = v(chain), recompute K.
/// Trace: cost = K_t, state = theta_t, budget = K_t.
AcogOutcome acog_step(BudgetState& budget, ChainStats& stats, SetFunctionEnvironment& env);

std::vector<std::string> acog_extra_columns();

}  // namespace confsel
