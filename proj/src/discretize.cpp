#include "confsel/discretize.hpp"

#include <cmath>

#include "confsel/core_control.hpp"

namespace confsel {

std::vector<double> discretize_threshold(double tau_min, double tau_max, double delta) {
    if (!(delta > 0.0)) {
        throw InvalidInput("grid width must be positive");
    }
    if (!(tau_max > tau_min) || delta > tau_max - tau_min) {
        throw InvalidInput("grid needs tau_max > tau_min and delta <= tau_max - tau_min");
    }
    const double span = tau_max - tau_min;
    // Snap counts that are an integer up to rounding so (0, 1, 0.25) gives 5 points.
    auto steps = static_cast<std::size_t>(std::floor(span / delta + 1e-9));
    std::vector<double> grid;
    grid.reserve(steps + 2);
    for (std::size_t k = 0; k <= steps; ++k) {
        grid.push_back(tau_min + static_cast<double>(k) * delta);
    }
    if (tau_max - grid.back() > 1e-9 * std::max(1.0, std::abs(tau_max))) {
        grid.push_back(tau_max);
    } else {
        grid.back() = tau_max;
    }
    return grid;
}

std::vector<GridInterval> discretize_intervals(double delta) {
    if (!(delta > 0.0) || delta > 1.0) {
        throw InvalidInput("interval grid width must lie in (0, 1]");
    }
    const double cells = 1.0 / delta;
    const auto m = static_cast<std::size_t>(std::llround(cells));
    if (m == 0 || std::abs(static_cast<double>(m) * delta - 1.0) > 1e-12) {
        throw InvalidInput("interval grid width must divide 1");
    }
    std::vector<GridInterval> arms;
    arms.reserve(m * (m + 1) / 2 + 1);
    arms.push_back(GridInterval{0.0, 0.0, true});
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = i + 1; j <= m; ++j) {
            // Endpoints as k/m so the last one is exactly 1.
            arms.push_back(GridInterval{static_cast<double>(i) / static_cast<double>(m),
                                        static_cast<double>(j) / static_cast<double>(m), false});
        }
    }
    return arms;
}

std::size_t full_interval_index(const std::vector<GridInterval>& arms) {
    for (std::size_t k = 0; k < arms.size(); ++k) {
        if (!arms[k].empty && arms[k].lo == 0.0 && arms[k].hi == 1.0) return k;
    }
    throw InvalidInput("interval grid has no full interval");
}

}  // namespace confsel
