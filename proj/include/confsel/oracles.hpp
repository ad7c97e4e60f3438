#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "confsel/discretize.hpp"
#include "confsel/environments.hpp"

namespace confsel {

/// No feasible solution exists; what() starts with the benchmark name.
class InfeasibleBenchmark : public std::runtime_error {
public:
    InfeasibleBenchmark(const std::string& benchmark, const std::string& detail);
    const std::string& benchmark() const noexcept { return benchmark_; }

private:
    std::string benchmark_;
};

struct LpSolution {
    double c_star = 0.0;
    std::vector<double> mixture;
};

/// min sum x_i omega_i  s.t.  sum x_i p_i >= phi, x in the simplex.
/// Exact: a basic optimum has support <= 2, so singles and pairs are enumerated.
LpSolution lp_benchmark(std::span<const double> p, std::span<const double> omega, double phi);

struct ThresholdBenchmark {
    double tau_star = 0.0;
    double c_star = 0.0;
};

/// Smallest tau with r(tau) >= phi by bisection to 1e-10; r non-decreasing.
ThresholdBenchmark threshold_benchmark(const std::function<double(double)>& r_curve,
                                       const std::function<double(double)>& c_curve, double tau_min, double tau_max,
                                       double phi);

struct IntervalBenchmark {
    std::size_t arm = 0;
    GridInterval interval;
    double mass = 0.0;
    double c_star = 0.0;             // shortest grid interval with mass >= phi
    double continuous_c_star = 0.0;  // shortest real interval with mass phi
    double gap = 0.0;                // c_star - continuous_c_star
};

/// Enumerates the grid of discretize_intervals(delta). Ties in length go to
/// the smallest left endpoint.
IntervalBenchmark interval_benchmark(double delta, const PointDist& dist, double phi);

/// Finite demand distribution on positive values.
struct DiscreteDemand {
    std::vector<double> values;
    std::vector<double> probs;

    double mean() const;
    /// r(q) = E[min(a, q)].
    double expected_sales(double q) const;
};

/// Poisson(lambda) clamped into [1, cap]: the mass below 1 moves to 1 and
/// the mass above cap moves to cap.
DiscreteDemand truncated_poisson(double lambda, int cap);

struct NewsvendorBenchmark {
    double q_star = 0.0;
    double mu = 0.0;
};

/// Solves r(q) = phi * mu by bisection to 1e-8.
NewsvendorBenchmark newsvendor_benchmark(const DiscreteDemand& demand, double phi);

struct GreedyReport {
    std::vector<std::size_t> chain;
    std::vector<double> prefix_values;  // f(G_k), k = 0..n
    double gap_delta = 0.0;             // min over positions of the greedy gain gap

    std::size_t n() const noexcept { return chain.size(); }
    /// q(rho) = min{k : f(G_k) >= rho}. Throws if f(V) < rho.
    std::size_t budget_for(double rho) const;
    /// f(G_{K*+1}) - phi with K* = q(phi); +inf when K* = n.
    double budget_margin(double phi) const;
    /// True when the budget margin is <= 1e-6.
    bool thin_margin(double phi) const;
};

using SetOracle = std::function<double(std::span<const std::size_t>)>;

/// Greedy chain on the exact set function; ties go to the lowest index.
/// Rejects a chain whose prefix values decrease.
GreedyReport greedy_chain(const SetOracle& f_oracle, std::size_t n);

}  // namespace confsel
