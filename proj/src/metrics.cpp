#include "confsel/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <variant>

#include "confsel/core_control.hpp"

namespace confsel {

std::vector<double> coverage_series(const Trace& trace) {
    if (trace.empty()) throw InvalidInput("coverage of an empty trace");
    std::vector<double> out;
    out.reserve(trace.size());
    double sum = 0.0;
    for (std::size_t k = 0; k < trace.size(); ++k) {
        sum += trace.rows[k].reward;
        out.push_back(sum / static_cast<double>(k + 1));
    }
    return out;
}

double coverage_window(const Trace& trace, std::int64_t first, std::int64_t last) {
    if (first < 1 || last < first || last > static_cast<std::int64_t>(trace.size())) {
        throw InvalidInput("coverage window outside the trace");
    }
    double sum = 0.0;
    for (std::int64_t t = first; t <= last; ++t) sum += trace.rows[static_cast<std::size_t>(t - 1)].reward;
    return sum / static_cast<double>(last - first + 1);
}

std::vector<double> regret_series(const Trace& trace, double c_star, bool positive_part) {
    std::vector<double> bench(trace.size(), c_star);
    return regret_series(trace, bench, positive_part);
}

std::vector<double> regret_series(const Trace& trace, std::span<const double> c_star, bool positive_part) {
    if (c_star.size() != trace.size()) throw InvalidInput("benchmark series length differs from the trace");
    std::vector<double> out;
    out.reserve(trace.size());
    double sum = 0.0;
    for (std::size_t k = 0; k < trace.size(); ++k) {
        const double d = trace.rows[k].cost - c_star[k];
        sum += positive_part ? std::max(d, 0.0) : d;
        out.push_back(sum);
    }
    return out;
}

SlopeFit sublinearity_fit(std::span<const std::pair<double, double>> end_regrets) {
    if (end_regrets.size() < 3) throw InvalidInput("slope fit needs at least 3 horizons");
    SlopeFit fit;
    std::vector<double> xs;
    std::vector<double> ys;
    for (const auto& [T, r] : end_regrets) {
        if (!(T > 0.0)) throw InvalidInput("horizons must be positive");
        double v = r;
        if (v < 1.0) {
            v = 1.0;
            fit.clipped = true;
        }
        xs.push_back(std::log(T));
        ys.push_back(std::log(v));
    }
    const double n = static_cast<double>(xs.size());
    double mx = 0.0;
    double my = 0.0;
    for (std::size_t k = 0; k < xs.size(); ++k) {
        mx += xs[k];
        my += ys[k];
    }
    mx /= n;
    my /= n;
    double sxx = 0.0;
    double sxy = 0.0;
    double syy = 0.0;
    for (std::size_t k = 0; k < xs.size(); ++k) {
        sxx += (xs[k] - mx) * (xs[k] - mx);
        sxy += (xs[k] - mx) * (ys[k] - my);
        syy += (ys[k] - my) * (ys[k] - my);
    }
    if (!(sxx > 0.0)) throw InvalidInput("slope fit needs distinct horizons");
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;
    fit.r2 = syy > 0.0 ? (sxy * sxy) / (sxx * syy) : 1.0;
    return fit;
}

namespace {

const ChainAction& chain_of(const TraceRecord& r) {
    const auto* c = std::get_if<ChainAction>(&r.action);
    if (c == nullptr) throw InvalidInput("deviation counting needs a chain trace");
    return *c;
}

}  // namespace

std::vector<bool> deviation_flags(const Trace& trace, const GreedyReport& report) {
    const std::size_t n = report.n();
    std::vector<bool> flags;
    flags.reserve(trace.size());
    std::vector<std::size_t> played;
    std::vector<std::size_t> greedy;
    for (const auto& r : trace.rows) {
        const auto& arms = chain_of(r).arms;
        if (arms.size() > n) throw InvalidInput("chain longer than the greedy report");
        for (auto a : arms) {
            if (a >= n) throw InvalidInput("chain arm outside the greedy report's ground set");
        }
        played.assign(arms.begin(), arms.end());
        greedy.assign(report.chain.begin(), report.chain.begin() + static_cast<std::ptrdiff_t>(arms.size()));
        std::sort(played.begin(), played.end());
        std::sort(greedy.begin(), greedy.end());
        flags.push_back(played != greedy);
    }
    return flags;
}

DeviationCounts deviation_counter(const Trace& trace, const GreedyReport& report) {
    DeviationCounts out;
    const auto flags = deviation_flags(trace, report);
    for (std::size_t k = 0; k < trace.size(); ++k) {
        if (flags[k]) ++out.set_based;
        const auto& arms = chain_of(trace.rows[k]).arms;
        if (!std::equal(arms.begin(), arms.end(), report.chain.begin())) ++out.order_based;
    }
    return out;
}

std::int64_t boundary_steps(const Trace& trace) {
    const auto it = std::find(trace.extra_columns.begin(), trace.extra_columns.end(), "boundary");
    if (it == trace.extra_columns.end()) return 0;
    const auto col = static_cast<std::size_t>(it - trace.extra_columns.begin());
    std::int64_t n = 0;
    for (const auto& r : trace.rows) n += r.extras[col] != 0.0 ? 1 : 0;
    return n;
}

MetricsReport build_report(const Trace& trace, std::span<const double> c_star_per_step) {
    MetricsReport rep;
    rep.coverage_cum = coverage_series(trace);
    rep.coverage_final = rep.coverage_cum.back();
    rep.regret_cum = regret_series(trace, c_star_per_step, false);
    rep.regret_pos_cum = regret_series(trace, c_star_per_step, true);
    rep.boundary_steps = boundary_steps(trace);
    rep.c_star = c_star_per_step.empty() ? 0.0 : c_star_per_step.front();
    return rep;
}

nlohmann::json to_json(const SlopeFit& fit) {
    return {{"slope", fit.slope}, {"intercept", fit.intercept}, {"r2", fit.r2}, {"clipped", fit.clipped}};
}

nlohmann::json MetricsReport::to_json() const {
    nlohmann::json j;
    j["steps"] = coverage_cum.size();
    j["coverage_final"] = coverage_final;
    j["regret_final"] = regret_cum.empty() ? 0.0 : regret_cum.back();
    j["regret_pos_final"] = regret_pos_cum.empty() ? 0.0 : regret_pos_cum.back();
    j["boundary_steps"] = boundary_steps;
    j["c_star"] = c_star;
    if (greedy_deviation) {
        j["greedy_deviation_steps"] = greedy_deviation->set_based;
        j["greedy_deviation_steps_ordered"] = greedy_deviation->order_based;
    }
    if (slope_fit) j["slope_fit"] = confsel::to_json(*slope_fit);
    return j;
}

}  // namespace confsel
