#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <span>
#include <variant>
#include <vector>

#include "confsel/discretize.hpp"
#include "confsel/rng.hpp"

namespace confsel {

/// Everything an algorithm is allowed to see after one bandit play.
struct Feedback {
    double reward = 0.0;
    double cost = 0.0;
};

/// Discrete-arm world with bandit feedback. Internal time advances by one on
/// every pull; observations are a pure function of (seed, step, arm).
class ArmEnvironment {
public:
    virtual ~ArmEnvironment() = default;

    virtual std::size_t arm_count() const = 0;
    virtual double max_cost() const = 0;
    /// Arm with reward 0 and cost 0 on every step.
    virtual std::size_t null_arm() const = 0;
    /// Arm with reward 1 and cost max_cost() on every step.
    virtual std::size_t full_arm() const = 0;

    Feedback pull(std::size_t arm);
    std::int64_t time() const noexcept { return time_; }

protected:
    virtual Feedback observe(std::int64_t step, std::size_t arm) = 0;

private:
    std::int64_t time_ = 0;
};

/// World where a scalar threshold is submitted each step.
class ThresholdEnvironment {
public:
    virtual ~ThresholdEnvironment() = default;

    virtual double tau_min() const = 0;
    virtual double tau_max() const = 0;

    /// Y = 1 iff tau >= tau_x for the step's hidden tau_x; cost is C(x, tau).
    Feedback respond(double tau);
    std::int64_t time() const noexcept { return time_; }

protected:
    virtual Feedback observe(std::int64_t step, double tau) = 0;

private:
    std::int64_t time_ = 0;
};

/// Per-step demand sequence for the inventory controller.
class DemandStream {
public:
    virtual ~DemandStream() = default;

    virtual double cap() const = 0;
    double next();
    std::int64_t time() const noexcept { return time_; }

protected:
    virtual double draw(std::int64_t step) = 0;

private:
    std::int64_t time_ = 0;
};

/// Monotone set-function world with semi-bandit feedback along a chain.
class SetFunctionEnvironment {
public:
    virtual ~SetFunctionEnvironment() = default;

    virtual std::size_t ground_size() const = 0;

    /// Values v_t(prefix_k) for k = 0..chain.size(); entry 0 is v_t(empty) = 0.
    std::vector<double> probe(std::span<const std::size_t> chain);
    std::int64_t time() const noexcept { return time_; }

protected:
    virtual std::vector<double> observe(std::int64_t step, std::span<const std::size_t> chain) = 0;

private:
    std::int64_t time_ = 0;
};

// ---------------------------------------------------------------------------
// i.i.d. discrete arms

struct FixedCost {
    double value = 0.0;
};
/// cost = support * Bernoulli(mean / support), so E[cost] = mean.
struct StochasticCost {
    double mean = 0.0;
    double support = 1.0;
};

struct ArmSpec {
    double p = 0.0;
    std::variant<FixedCost, StochasticCost> cost = FixedCost{};

    double mean_cost() const;
};

class IidArmWorld final : public ArmEnvironment {
public:
    /// Appends a null arm (p=0, cost 0) and a full arm (p=1, cost c_max) when
    /// the specs lack them.
    IidArmWorld(std::vector<ArmSpec> specs, double c_max, std::uint64_t seed);

    std::size_t arm_count() const override { return specs_.size(); }
    double max_cost() const override { return c_max_; }
    std::size_t null_arm() const override { return null_arm_; }
    std::size_t full_arm() const override { return full_arm_; }

    const std::vector<ArmSpec>& specs() const noexcept { return specs_; }
    std::vector<double> means() const;
    std::vector<double> mean_costs() const;

protected:
    Feedback observe(std::int64_t step, std::size_t arm) override;

private:
    std::vector<ArmSpec> specs_;
    double c_max_;
    std::size_t null_arm_ = 0;
    std::size_t full_arm_ = 0;
    rng::Stream reward_stream_;
    rng::Stream cost_stream_;
};

std::unique_ptr<IidArmWorld> make_iid_arms(std::vector<ArmSpec> specs, double c_max, std::uint64_t seed);

// ---------------------------------------------------------------------------
// Interval selection over [0, 1]

struct BetaDist {
    double a = 2.0;
    double b = 5.0;
};
struct UniformDist {};
using PointDist = std::variant<BetaDist, UniformDist>;

/// Draw from the point distribution using the uniforms of one step.
double sample_point(const PointDist& dist, const rng::Stream& stream, std::int64_t step);
double point_density(const PointDist& dist, double y);
/// CDF by adaptive Simpson quadrature of the density (tolerance 1e-10).
double point_cdf(const PointDist& dist, double y);

class IntervalWorld final : public ArmEnvironment {
public:
    IntervalWorld(double delta, PointDist dist, std::uint64_t seed);

    std::size_t arm_count() const override { return arms_.size(); }
    double max_cost() const override { return 1.0; }
    std::size_t null_arm() const override { return 0; }
    std::size_t full_arm() const override { return full_arm_; }

    const std::vector<GridInterval>& arms() const noexcept { return arms_; }
    const PointDist& distribution() const noexcept { return dist_; }
    double delta() const noexcept { return delta_; }
    /// Debug side channel: the last realized point. Never part of Feedback.
    double debug_last_point() const noexcept { return last_point_; }

protected:
    Feedback observe(std::int64_t step, std::size_t arm) override;

private:
    double delta_;
    PointDist dist_;
    std::vector<GridInterval> arms_;
    std::size_t full_arm_;
    rng::Stream point_stream_;
    double last_point_ = 0.0;
};

std::unique_ptr<IntervalWorld> make_interval_world(double delta, PointDist dist, std::uint64_t seed);

// ---------------------------------------------------------------------------
// Adversarial trap: arms {zero, trap, safe}

class AdversarialTrap final : public ArmEnvironment {
public:
    static constexpr std::size_t kZero = 0;
    static constexpr std::size_t kTrap = 1;
    static constexpr std::size_t kSafe = 2;
    static constexpr double kTrapCost = 0.05;

    /// The trap fails on steps t with window_start < t <= window_end.
    AdversarialTrap(std::int64_t window_start, std::int64_t window_end);

    std::size_t arm_count() const override { return 3; }
    double max_cost() const override { return 1.0; }
    std::size_t null_arm() const override { return kZero; }
    std::size_t full_arm() const override { return kSafe; }

    bool in_window(std::int64_t step) const noexcept { return step > start_ && step <= end_; }

protected:
    Feedback observe(std::int64_t step, std::size_t arm) override;

private:
    std::int64_t start_;
    std::int64_t end_;
};

std::unique_ptr<AdversarialTrap> make_adversarial_trap(std::uint64_t seed, std::int64_t window_start,
                                                       std::int64_t window_end);

// ---------------------------------------------------------------------------
// Monotone score-threshold world

class ScoreWorld final : public ThresholdEnvironment {
public:
    using Quantile = std::function<double(double)>;
    using CostFn = std::function<double(double tau_x, double tau)>;

    /// tau_x = quantile(U) with U uniform; cost_fn must be non-decreasing in tau.
    ScoreWorld(double tau_min, double tau_max, Quantile tau_x_quantile, CostFn cost_fn, std::uint64_t seed);

    double tau_min() const override { return tau_min_; }
    double tau_max() const override { return tau_max_; }
    double debug_last_tau_x() const noexcept { return last_tau_x_; }

protected:
    Feedback observe(std::int64_t step, double tau) override;

private:
    double tau_min_;
    double tau_max_;
    Quantile quantile_;
    CostFn cost_;
    rng::Stream stream_;
    double last_tau_x_ = 0.0;
};

std::unique_ptr<ScoreWorld> make_score_world(double tau_min, double tau_max, ScoreWorld::Quantile tau_x_quantile,
                                             ScoreWorld::CostFn cost_fn, std::uint64_t seed);

/// tau_x ~ Uniform[0, 1] and cost = tau, so r(tau) = c(tau) = tau.
std::unique_ptr<ScoreWorld> make_uniform_score_world(std::uint64_t seed);

/// Bandit view of a threshold world: arm k submits grid[k].
class DiscretizedThresholdArms final : public ArmEnvironment {
public:
    DiscretizedThresholdArms(std::unique_ptr<ThresholdEnvironment> world, std::vector<double> grid, double c_max);

    std::size_t arm_count() const override { return grid_.size(); }
    double max_cost() const override { return c_max_; }
    std::size_t null_arm() const override { return 0; }
    std::size_t full_arm() const override { return grid_.size() - 1; }
    const std::vector<double>& grid() const noexcept { return grid_; }

protected:
    Feedback observe(std::int64_t step, std::size_t arm) override;

private:
    std::unique_ptr<ThresholdEnvironment> world_;
    std::vector<double> grid_;
    double c_max_;
};

// ---------------------------------------------------------------------------
// Truncated Poisson demand with a rate change

class PoissonDemand final : public DemandStream {
public:
    /// a_t = clamp(Poisson(rate_t), 1, cap); rate_t = before for t <= shift_t.
    PoissonDemand(double lambda_before, double lambda_after, std::int64_t shift_t, double cap, std::uint64_t seed);

    double cap() const override { return cap_; }
    double rate_at(std::int64_t step) const noexcept { return step <= shift_t_ ? before_ : after_; }

protected:
    double draw(std::int64_t step) override;

private:
    double before_;
    double after_;
    std::int64_t shift_t_;
    double cap_;
    rng::Stream stream_;
};

/// Poisson(lambda) by inversion of one uniform.
std::int64_t poisson_inverse(double lambda, double u);

std::unique_ptr<PoissonDemand> make_poisson_demand(double lambda_before, double lambda_after, std::int64_t shift_t,
                                                   double cap, std::uint64_t seed);

// ---------------------------------------------------------------------------
// OR of independent arms

class OrWorld final : public SetFunctionEnvironment {
public:
    OrWorld(std::vector<double> p, std::uint64_t seed);

    std::size_t ground_size() const override { return p_.size(); }
    const std::vector<double>& probabilities() const noexcept { return p_; }
    /// f(S) = 1 - prod_{i in S} (1 - p_i).
    double expected_value(std::span<const std::size_t> set) const;

protected:
    std::vector<double> observe(std::int64_t step, std::span<const std::size_t> chain) override;

private:
    std::vector<double> p_;
    rng::Stream stream_;
};

std::unique_ptr<OrWorld> make_or_world(std::vector<double> p, std::uint64_t seed);

/// n success probabilities drawn Uniform[low, high] from the seed.
std::vector<double> draw_or_probabilities(std::size_t n, double low, double high, std::uint64_t seed);

}  // namespace confsel
