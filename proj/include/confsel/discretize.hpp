#pragma once

#include <cstddef>
#include <vector>

namespace confsel {

/// Grid {tau_min, tau_min + delta, ...} with the last point forced to tau_max.
std::vector<double> discretize_threshold(double tau_min, double tau_max, double delta);

/// A closed grid interval [lo, hi] of [0, 1], or the empty selection.
struct GridInterval {
    double lo = 0.0;
    double hi = 0.0;
    bool empty = true;

    double length() const noexcept { return empty ? 0.0 : hi - lo; }
    bool contains(double y) const noexcept { return !empty && lo <= y && y <= hi; }
};

/// The empty arm (index 0) followed by every [i*delta, j*delta] with
/// 0 <= i < j <= m, m = round(1/delta), ordered by (i, j).
/// Arm count is m(m+1)/2 + 1. delta must divide 1 to within 1e-12.
std::vector<GridInterval> discretize_intervals(double delta);

/// Index of [0, 1] in the output of discretize_intervals.
std::size_t full_interval_index(const std::vector<GridInterval>& arms);

}  // namespace confsel
