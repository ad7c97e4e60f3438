#pragma once

#include <string>
#include <vector>

namespace confsel::svg {

struct Series {
    std::string label;
    std::vector<double> y;  // plotted against x = 1..y.size()
};

/// Self-contained SVG line chart with axes and at most two series.
/// Long series are thinned to about 1500 points per line.
std::string line_chart(const std::string& title, const std::string& x_label, const std::vector<Series>& series);

}  // namespace confsel::svg
