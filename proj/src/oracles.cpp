#include "confsel/oracles.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "confsel/core_control.hpp"

namespace confsel {

InfeasibleBenchmark::InfeasibleBenchmark(const std::string& benchmark, const std::string& detail)
    : std::runtime_error(benchmark + ": " + detail), benchmark_(benchmark) {}

LpSolution lp_benchmark(std::span<const double> p, std::span<const double> omega, double phi) {
    if (p.size() != omega.size() || p.empty()) throw InvalidInput("lp_benchmark: p and omega must be non-empty and equal length");
    const std::size_t n = p.size();
    constexpr double kTol = 1e-12;
    double best = std::numeric_limits<double>::infinity();
    std::vector<double> mixture(n, 0.0);

    for (std::size_t i = 0; i < n; ++i) {
        if (p[i] >= phi - kTol && omega[i] < best) {
            best = omega[i];
            std::fill(mixture.begin(), mixture.end(), 0.0);
            mixture[i] = 1.0;
        }
    }
    // Pairs with p_lo < phi < p_hi, mixed to meet the constraint exactly.
    for (std::size_t i = 0; i < n; ++i) {
        if (!(p[i] < phi)) continue;
        for (std::size_t j = 0; j < n; ++j) {
            if (!(p[j] > phi)) continue;
            const double w = (phi - p[i]) / (p[j] - p[i]);
            const double c = (1.0 - w) * omega[i] + w * omega[j];
            if (c < best - kTol) {
                best = c;
                std::fill(mixture.begin(), mixture.end(), 0.0);
                mixture[i] = 1.0 - w;
                mixture[j] = w;
            }
        }
    }
    if (!std::isfinite(best)) throw InfeasibleBenchmark("lp_benchmark", "no mixture of arms reaches the coverage target");
    return LpSolution{best, std::move(mixture)};
}

ThresholdBenchmark threshold_benchmark(const std::function<double(double)>& r_curve,
                                       const std::function<double(double)>& c_curve, double tau_min, double tau_max,
                                       double phi) {
    if (!(tau_max > tau_min)) throw InvalidInput("threshold_benchmark: empty threshold range");
    const double r_lo = r_curve(tau_min);
    const double r_hi = r_curve(tau_max);
    if (phi > r_hi) throw InfeasibleBenchmark("threshold_benchmark", "phi above r(tau_max)");
    if (r_lo >= phi) return {tau_min, c_curve(tau_min)};
    double lo = tau_min;
    double hi = tau_max;
    while (hi - lo > 1e-10) {
        const double mid = 0.5 * (lo + hi);
        if (r_curve(mid) >= phi) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    return {hi, c_curve(hi)};
}

namespace {

double point_quantile(const PointDist& dist, double u) {
    if (u <= 0.0) return 0.0;
    if (u >= 1.0) return 1.0;
    double lo = 0.0;
    double hi = 1.0;
    for (int it = 0; it < 60; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (point_cdf(dist, mid) < u) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

double continuous_interval_optimum(const PointDist& dist, double phi) {
    if (phi >= 1.0) return 1.0;
    const auto length_at = [&](double u) { return point_quantile(dist, u + phi) - point_quantile(dist, u); };
    const double span = 1.0 - phi;
    constexpr int kScan = 64;
    int best_k = 0;
    double best = length_at(0.0);
    for (int k = 1; k <= kScan; ++k) {
        const double v = length_at(span * k / kScan);
        if (v < best) {
            best = v;
            best_k = k;
        }
    }
    double a = span * std::max(best_k - 1, 0) / kScan;
    double b = span * std::min(best_k + 1, kScan) / kScan;
    const double g = 0.5 * (std::sqrt(5.0) - 1.0);
    for (int it = 0; it < 60 && b - a > 1e-12; ++it) {
        const double x1 = b - g * (b - a);
        const double x2 = a + g * (b - a);
        if (length_at(x1) < length_at(x2)) {
            b = x2;
        } else {
            a = x1;
        }
    }
    return std::min(best, length_at(0.5 * (a + b)));
}

}  // namespace

IntervalBenchmark interval_benchmark(double delta, const PointDist& dist, double phi) {
    if (!(phi >= 0.0 && phi <= 1.0)) throw InvalidInput("interval_benchmark: phi must lie in [0, 1]");
    const auto arms = discretize_intervals(delta);
    const auto m = static_cast<int>(std::lround(1.0 / delta));
    std::vector<double> cdf(m + 1);
    for (int i = 0; i <= m; ++i) cdf[i] = i == 0 ? 0.0 : (i == m ? 1.0 : point_cdf(dist, i * delta));

    IntervalBenchmark out;
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < arms.size(); ++k) {
        const auto& arm = arms[k];
        double mass = 0.0;
        if (!arm.empty) {
            const auto i = static_cast<int>(std::lround(arm.lo / delta));
            const auto j = static_cast<int>(std::lround(arm.hi / delta));
            mass = cdf[j] - cdf[i];
        }
        if (mass < phi - 1e-12) continue;
        // Arms are ordered by left endpoint, so strict < keeps the smallest one.
        if (arm.length() < best - 1e-12) {
            best = arm.length();
            out.arm = k;
            out.interval = arm;
            out.mass = mass;
        }
    }
    out.c_star = best;
    out.continuous_c_star = continuous_interval_optimum(dist, phi);
    out.gap = out.c_star - out.continuous_c_star;
    return out;
}

double DiscreteDemand::mean() const {
    double mu = 0.0;
    for (std::size_t k = 0; k < values.size(); ++k) mu += probs[k] * values[k];
    return mu;
}

double DiscreteDemand::expected_sales(double q) const {
    double r = 0.0;
    for (std::size_t k = 0; k < values.size(); ++k) r += probs[k] * std::min(values[k], q);
    return r;
}

DiscreteDemand truncated_poisson(double lambda, int cap) {
    if (!(lambda > 0.0)) throw InvalidInput("poisson rate must be positive");
    if (cap < 1) throw InvalidInput("demand cap must be at least 1");
    DiscreteDemand d;
    double pk = std::exp(-lambda);  // P(X = 0)
    double below = pk;              // P(X <= k)
    for (int k = 1; k <= cap; ++k) {
        pk *= lambda / k;
        d.values.push_back(k);
        d.probs.push_back(k == 1 ? below + pk : pk);
        below += pk;
    }
    d.probs.back() += std::max(1.0 - below, 0.0);
    return d;
}

NewsvendorBenchmark newsvendor_benchmark(const DiscreteDemand& demand, double phi) {
    if (demand.values.empty() || demand.values.size() != demand.probs.size()) {
        throw InvalidInput("newsvendor_benchmark: malformed demand distribution");
    }
    if (!(phi > 0.0 && phi <= 1.0)) throw InfeasibleBenchmark("newsvendor_benchmark", "phi must lie in (0, 1]");
    const double mu = demand.mean();
    const double target = phi * mu;
    double lo = 0.0;
    double hi = *std::max_element(demand.values.begin(), demand.values.end());
    if (demand.expected_sales(hi) < target - 1e-12) {
        throw InfeasibleBenchmark("newsvendor_benchmark", "target service level is out of reach");
    }
    while (hi - lo > 1e-8) {
        const double mid = 0.5 * (lo + hi);
        if (demand.expected_sales(mid) >= target) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    return {hi, mu};
}

std::size_t GreedyReport::budget_for(double rho) const {
    for (std::size_t k = 0; k < prefix_values.size(); ++k) {
        if (prefix_values[k] >= rho) return k;
    }
    throw InfeasibleBenchmark("greedy_chain", "f(V) is below the requested level");
}

double GreedyReport::budget_margin(double phi) const {
    const std::size_t k = budget_for(phi);
    if (k >= n()) return std::numeric_limits<double>::infinity();
    return prefix_values[k + 1] - phi;
}

bool GreedyReport::thin_margin(double phi) const { return budget_margin(phi) <= 1e-6; }

GreedyReport greedy_chain(const SetOracle& f_oracle, std::size_t n) {
    if (n == 0) throw InvalidInput("greedy_chain: empty ground set");
    GreedyReport rep;
    rep.prefix_values.push_back(0.0);
    rep.gap_delta = std::numeric_limits<double>::infinity();
    std::vector<bool> used(n, false);
    std::vector<std::size_t> trial;
    for (std::size_t k = 0; k < n; ++k) {
        const double base = rep.prefix_values.back();
        double best = -std::numeric_limits<double>::infinity();
        double second = -std::numeric_limits<double>::infinity();
        std::size_t best_arm = n;
        double best_value = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            if (used[i]) continue;
            trial = rep.chain;
            trial.push_back(i);
            const double v = f_oracle(trial);
            const double gain = v - base;
            if (best_arm == n || gain > best) {
                second = best;
                best = gain;
                best_arm = i;
                best_value = v;
            } else if (gain > second) {
                second = gain;
            }
        }
        if (best_value < base - 1e-12) throw InvalidInput("greedy_chain: set function is not monotone");
        if (std::isfinite(second)) rep.gap_delta = std::min(rep.gap_delta, best - second);
        used[best_arm] = true;
        rep.chain.push_back(best_arm);
        rep.prefix_values.push_back(best_value);
    }
    if (!std::isfinite(rep.gap_delta)) rep.gap_delta = 0.0;
    return rep;
}

}  // namespace confsel
