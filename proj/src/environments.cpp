#include "confsel/environments.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

#include "confsel/core_control.hpp"

namespace confsel {

Feedback ArmEnvironment::pull(std::size_t arm) {
    if (arm >= arm_count()) {
        throw InvalidInput("arm index " + std::to_string(arm) + " out of range");
    }
    ++time_;
    return observe(time_, arm);
}

Feedback ThresholdEnvironment::respond(double tau) {
    ++time_;
    return observe(time_, tau);
}

double DemandStream::next() {
    ++time_;
    return draw(time_);
}

std::vector<double> SetFunctionEnvironment::probe(std::span<const std::size_t> chain) {
    for (std::size_t arm : chain) {
        if (arm >= ground_size()) {
            throw InvalidInput("chain arm " + std::to_string(arm) + " out of range");
        }
    }
    ++time_;
    return observe(time_, chain);
}

// ---------------------------------------------------------------------------

double ArmSpec::mean_cost() const {
    return std::visit([](const auto& c) -> double {
        using T = std::decay_t<decltype(c)>;
        if constexpr (std::is_same_v<T, FixedCost>) {
            return c.value;
        } else {
            return c.mean;
        }
    }, cost);
}

IidArmWorld::IidArmWorld(std::vector<ArmSpec> specs, double c_max, std::uint64_t seed)
    : specs_(std::move(specs)),
      c_max_(c_max),
      reward_stream_(seed, rng::Component::ArmReward),
      cost_stream_(seed, rng::Component::ArmCost) {
    if (!(c_max > 0.0)) {
        throw InvalidInput("c_max must be positive");
    }
    for (const auto& s : specs_) {
        if (!(s.p >= 0.0 && s.p <= 1.0)) {
            throw InvalidInput("arm success probability must lie in [0, 1]");
        }
        if (const auto* f = std::get_if<FixedCost>(&s.cost)) {
            if (!(f->value >= 0.0 && f->value <= c_max)) throw InvalidInput("fixed arm cost outside [0, c_max]");
        } else {
            const auto& sc = std::get<StochasticCost>(s.cost);
            if (!(sc.support > 0.0 && sc.support <= c_max && sc.mean >= 0.0 && sc.mean <= sc.support)) {
                throw InvalidInput("stochastic arm cost needs 0 <= mean <= support <= c_max");
            }
        }
    }
    auto is_fixed = [](const ArmSpec& s, double v) {
        const auto* f = std::get_if<FixedCost>(&s.cost);
        return f != nullptr && f->value == v;
    };
    auto find = [&](double p, double cost) -> std::ptrdiff_t {
        for (std::size_t k = 0; k < specs_.size(); ++k) {
            if (specs_[k].p == p && is_fixed(specs_[k], cost)) return static_cast<std::ptrdiff_t>(k);
        }
        return -1;
    };
    auto null_idx = find(0.0, 0.0);
    if (null_idx < 0) {
        specs_.push_back(ArmSpec{0.0, FixedCost{0.0}});
        null_idx = static_cast<std::ptrdiff_t>(specs_.size() - 1);
    }
    auto full_idx = find(1.0, c_max);
    if (full_idx < 0) {
        specs_.push_back(ArmSpec{1.0, FixedCost{c_max}});
        full_idx = static_cast<std::ptrdiff_t>(specs_.size() - 1);
    }
    null_arm_ = static_cast<std::size_t>(null_idx);
    full_arm_ = static_cast<std::size_t>(full_idx);
}

std::vector<double> IidArmWorld::means() const {
    std::vector<double> out;
    for (const auto& s : specs_) out.push_back(s.p);
    return out;
}

std::vector<double> IidArmWorld::mean_costs() const {
    std::vector<double> out;
    for (const auto& s : specs_) out.push_back(s.mean_cost());
    return out;
}

Feedback IidArmWorld::observe(std::int64_t step, std::size_t arm) {
    const auto& s = specs_[arm];
    const auto ustep = static_cast<std::uint64_t>(step);
    Feedback fb;
    fb.reward = reward_stream_.uniform(ustep, arm) < s.p ? 1.0 : 0.0;
    if (const auto* f = std::get_if<FixedCost>(&s.cost)) {
        fb.cost = f->value;
    } else {
        const auto& sc = std::get<StochasticCost>(s.cost);
        fb.cost = cost_stream_.uniform(ustep, arm) < sc.mean / sc.support ? sc.support : 0.0;
    }
    return fb;
}

std::unique_ptr<IidArmWorld> make_iid_arms(std::vector<ArmSpec> specs, double c_max, std::uint64_t seed) {
    if (specs.empty()) {
        throw InvalidInput("arm specification list is empty");
    }
    return std::make_unique<IidArmWorld>(std::move(specs), c_max, seed);
}

// ---------------------------------------------------------------------------

namespace {

bool is_whole(double x) { return x >= 1.0 && std::floor(x) == x && x <= 64.0; }

void check_dist(const PointDist& dist) {
    if (const auto* b = std::get_if<BetaDist>(&dist)) {
        if (!(b->a >= 1.0 && b->b >= 1.0)) {
            throw InvalidInput("Beta point distribution requires a >= 1 and b >= 1");
        }
    }
}

double simpson(double a, double b, double fa, double fm, double fb) {
    return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

double adaptive_simpson(const std::function<double(double)>& f, double a, double b, double fa, double fm,
                        double fb, double whole, double tol, int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m);
    const double rm = 0.5 * (m + b);
    const double flm = f(lm);
    const double frm = f(rm);
    const double left = simpson(a, m, fa, flm, fm);
    const double right = simpson(m, b, fm, frm, fb);
    const double delta = left + right - whole;
    if (depth <= 0 || std::abs(delta) <= 15.0 * tol) {
        return left + right + delta / 15.0;
    }
    return adaptive_simpson(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
           adaptive_simpson(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

double integrate(const std::function<double(double)>& f, double a, double b, double tol) {
    if (b <= a) return 0.0;
    const double fa = f(a);
    const double fb = f(b);
    const double fm = f(0.5 * (a + b));
    return adaptive_simpson(f, a, b, fa, fm, fb, simpson(a, b, fa, fm, fb), tol, 50);
}

}  // namespace

double sample_point(const PointDist& dist, const rng::Stream& stream, std::int64_t step) {
    const auto ustep = static_cast<std::uint64_t>(step);
    if (std::holds_alternative<UniformDist>(dist)) {
        return stream.uniform(ustep, 0);
    }
    const auto& beta = std::get<BetaDist>(dist);
    if (is_whole(beta.a) && is_whole(beta.b)) {
        // Beta(a, b) with integer parameters is the a-th order statistic of
        // a + b - 1 uniforms.
        const auto count = static_cast<std::size_t>(beta.a + beta.b - 1.0);
        const auto rank = static_cast<std::size_t>(beta.a) - 1;
        std::vector<double> u(count);
        for (std::size_t k = 0; k < count; ++k) u[k] = stream.uniform(ustep, k);
        std::nth_element(u.begin(), u.begin() + static_cast<std::ptrdiff_t>(rank), u.end());
        return u[rank];
    }
    std::mt19937_64 gen(stream.bits(ustep, 0));
    std::gamma_distribution<double> ga(beta.a, 1.0);
    std::gamma_distribution<double> gb(beta.b, 1.0);
    const double x = ga(gen);
    const double y = gb(gen);
    return x / (x + y);
}

double point_density(const PointDist& dist, double y) {
    if (y < 0.0 || y > 1.0) return 0.0;
    if (std::holds_alternative<UniformDist>(dist)) return 1.0;
    const auto& b = std::get<BetaDist>(dist);
    const double log_norm = std::lgamma(b.a + b.b) - std::lgamma(b.a) - std::lgamma(b.b);
    const double la = (b.a == 1.0) ? 0.0 : (b.a - 1.0) * std::log(y);
    const double lb = (b.b == 1.0) ? 0.0 : (b.b - 1.0) * std::log1p(-y);
    return std::exp(log_norm + la + lb);
}

double point_cdf(const PointDist& dist, double y) {
    if (y <= 0.0) return 0.0;
    if (y >= 1.0) return 1.0;
    if (std::holds_alternative<UniformDist>(dist)) return y;
    check_dist(dist);
    auto f = [&](double x) { return point_density(dist, x); };
    // Integrate the shorter tail for accuracy near 1.
    if (y <= 0.5) return integrate(f, 0.0, y, 1e-12);
    return 1.0 - integrate(f, y, 1.0, 1e-12);
}

IntervalWorld::IntervalWorld(double delta, PointDist dist, std::uint64_t seed)
    : delta_(delta),
      dist_(dist),
      arms_(discretize_intervals(delta)),
      full_arm_(full_interval_index(arms_)),
      point_stream_(seed, rng::Component::IntervalPoint) {
    check_dist(dist_);
}

Feedback IntervalWorld::observe(std::int64_t step, std::size_t arm) {
    last_point_ = sample_point(dist_, point_stream_, step);
    const auto& iv = arms_[arm];
    return Feedback{iv.contains(last_point_) ? 1.0 : 0.0, iv.length()};
}

std::unique_ptr<IntervalWorld> make_interval_world(double delta, PointDist dist, std::uint64_t seed) {
    return std::make_unique<IntervalWorld>(delta, dist, seed);
}

// ---------------------------------------------------------------------------

AdversarialTrap::AdversarialTrap(std::int64_t window_start, std::int64_t window_end)
    : start_(window_start), end_(window_end) {
    if (window_start < 0 || window_end <= window_start) {
        throw InvalidInput("trap window needs 0 <= start < end");
    }
}

Feedback AdversarialTrap::observe(std::int64_t step, std::size_t arm) {
    switch (arm) {
        case kZero:
            return Feedback{0.0, 0.0};
        case kTrap:
            return Feedback{in_window(step) ? 0.0 : 1.0, kTrapCost};
        default:
            return Feedback{1.0, 1.0};
    }
}

std::unique_ptr<AdversarialTrap> make_adversarial_trap(std::uint64_t /*seed*/, std::int64_t window_start,
                                                       std::int64_t window_end) {
    return std::make_unique<AdversarialTrap>(window_start, window_end);
}

// ---------------------------------------------------------------------------

ScoreWorld::ScoreWorld(double tau_min, double tau_max, Quantile tau_x_quantile, CostFn cost_fn, std::uint64_t seed)
    : tau_min_(tau_min),
      tau_max_(tau_max),
      quantile_(std::move(tau_x_quantile)),
      cost_(std::move(cost_fn)),
      stream_(seed, rng::Component::ScoreContext) {
    if (!(tau_max > tau_min)) {
        throw InvalidInput("score world needs tau_max > tau_min");
    }
}

Feedback ScoreWorld::observe(std::int64_t step, double tau) {
    last_tau_x_ = std::clamp(quantile_(stream_.uniform(static_cast<std::uint64_t>(step))), tau_min_, tau_max_);
    // Success at equality: Y(x, tau) = 1 iff tau >= tau_x.
    return Feedback{tau >= last_tau_x_ ? 1.0 : 0.0, cost_(last_tau_x_, tau)};
}

std::unique_ptr<ScoreWorld> make_score_world(double tau_min, double tau_max, ScoreWorld::Quantile tau_x_quantile,
                                             ScoreWorld::CostFn cost_fn, std::uint64_t seed) {
    return std::make_unique<ScoreWorld>(tau_min, tau_max, std::move(tau_x_quantile), std::move(cost_fn), seed);
}

std::unique_ptr<ScoreWorld> make_uniform_score_world(std::uint64_t seed) {
    // U in [0, 1) never hits tau_min = 0 exactly except with probability 2^-53;
    // shift to (0, 1] so tau = 0 always fails.
    return make_score_world(
        0.0, 1.0, [](double u) { return 1.0 - u; }, [](double, double tau) { return tau; }, seed);
}

DiscretizedThresholdArms::DiscretizedThresholdArms(std::unique_ptr<ThresholdEnvironment> world,
                                                   std::vector<double> grid, double c_max)
    : world_(std::move(world)), grid_(std::move(grid)), c_max_(c_max) {
    if (!world_ || grid_.size() < 2) {
        throw InvalidInput("discretized threshold arms need a world and at least two grid points");
    }
}

Feedback DiscretizedThresholdArms::observe(std::int64_t, std::size_t arm) { return world_->respond(grid_[arm]); }

// ---------------------------------------------------------------------------

std::int64_t poisson_inverse(double lambda, double u) {
    if (!(lambda > 0.0)) {
        throw InvalidInput("Poisson rate must be positive");
    }
    double p = std::exp(-lambda);
    double cdf = p;
    std::int64_t k = 0;
    // Beyond lambda + 40 sqrt(lambda) + 100 the remaining mass is far below
    // double resolution.
    const auto limit = static_cast<std::int64_t>(lambda + 40.0 * std::sqrt(lambda) + 100.0);
    while (u >= cdf && k < limit) {
        ++k;
        p *= lambda / static_cast<double>(k);
        cdf += p;
    }
    return k;
}

PoissonDemand::PoissonDemand(double lambda_before, double lambda_after, std::int64_t shift_t, double cap,
                             std::uint64_t seed)
    : before_(lambda_before),
      after_(lambda_after),
      shift_t_(shift_t),
      cap_(cap),
      stream_(seed, rng::Component::Demand) {
    if (!(lambda_before > 0.0 && lambda_after > 0.0)) throw InvalidInput("Poisson rates must be positive");
    if (!(cap >= 1.0)) throw InvalidInput("demand cap must be at least 1");
}

double PoissonDemand::draw(std::int64_t step) {
    const auto k = poisson_inverse(rate_at(step), stream_.uniform(static_cast<std::uint64_t>(step)));
    return std::clamp(static_cast<double>(k), 1.0, cap_);
}

std::unique_ptr<PoissonDemand> make_poisson_demand(double lambda_before, double lambda_after, std::int64_t shift_t,
                                                   double cap, std::uint64_t seed) {
    return std::make_unique<PoissonDemand>(lambda_before, lambda_after, shift_t, cap, seed);
}

// ---------------------------------------------------------------------------

OrWorld::OrWorld(std::vector<double> p, std::uint64_t seed)
    : p_(std::move(p)), stream_(seed, rng::Component::OrOutcome) {
    for (double pi : p_) {
        if (!(pi >= 0.0 && pi <= 1.0)) throw InvalidInput("OR arm probability must lie in [0, 1]");
    }
}

double OrWorld::expected_value(std::span<const std::size_t> set) const {
    double miss = 1.0;
    for (std::size_t i : set) miss *= 1.0 - p_.at(i);
    return 1.0 - miss;
}

std::vector<double> OrWorld::observe(std::int64_t step, std::span<const std::size_t> chain) {
    std::vector<double> values(chain.size() + 1, 0.0);
    double v = 0.0;
    for (std::size_t k = 0; k < chain.size(); ++k) {
        const std::size_t arm = chain[k];
        if (stream_.uniform(static_cast<std::uint64_t>(step), arm) < p_[arm]) v = 1.0;
        values[k + 1] = v;
    }
    return values;
}

std::unique_ptr<OrWorld> make_or_world(std::vector<double> p, std::uint64_t seed) {
    return std::make_unique<OrWorld>(std::move(p), seed);
}

std::vector<double> draw_or_probabilities(std::size_t n, double low, double high, std::uint64_t seed) {
    if (!(low >= 0.0 && high <= 1.0 && low <= high)) {
        throw InvalidInput("OR probability range must satisfy 0 <= low <= high <= 1");
    }
    rng::Stream stream(seed, rng::Component::OrInstance);
    std::vector<double> p(n);
    for (std::size_t i = 0; i < n; ++i) p[i] = low + (high - low) * stream.uniform(0, i);
    return p;
}

}  // namespace confsel
