#include "confsel/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace confsel::svg {

namespace {

constexpr double kWidth = 720.0;
constexpr double kHeight = 420.0;
constexpr double kLeft = 70.0;
constexpr double kRight = 20.0;
constexpr double kTop = 40.0;
constexpr double kBottom = 50.0;
constexpr const char* kColors[] = {"#1f77b4", "#d62728"};

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.2f", v);
    return buf;
}

std::string tick_label(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.4g", v);
    return buf;
}

std::string escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            default: out += c;
        }
    }
    return out;
}

}  // namespace

std::string line_chart(const std::string& title, const std::string& x_label, const std::vector<Series>& series) {
    if (series.empty() || series.size() > 2) throw std::invalid_argument("line chart takes one or two series");
    double ymin = std::numeric_limits<double>::infinity();
    double ymax = -std::numeric_limits<double>::infinity();
    std::size_t xmax = 1;
    for (const auto& s : series) {
        for (double v : s.y) {
            ymin = std::min(ymin, v);
            ymax = std::max(ymax, v);
        }
        xmax = std::max(xmax, s.y.size());
    }
    if (!std::isfinite(ymin)) {
        ymin = 0.0;
        ymax = 1.0;
    }
    if (ymax - ymin < 1e-12) {
        ymin -= 0.5;
        ymax += 0.5;
    }
    const double pad = 0.05 * (ymax - ymin);
    ymin -= pad;
    ymax += pad;

    const double pw = kWidth - kLeft - kRight;
    const double ph = kHeight - kTop - kBottom;
    const auto px = [&](double x) { return kLeft + pw * (x - 1.0) / std::max(1.0, static_cast<double>(xmax) - 1.0); };
    const auto py = [&](double y) { return kTop + ph * (1.0 - (y - ymin) / (ymax - ymin)); };

    std::ostringstream o;
    o << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\"" << kHeight
      << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
    o << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    o << "<text x=\"" << kWidth / 2 << "\" y=\"22\" text-anchor=\"middle\" font-size=\"15\">" << escape(title)
      << "</text>\n";
    o << "<line x1=\"" << kLeft << "\" y1=\"" << kTop + ph << "\" x2=\"" << kLeft + pw << "\" y2=\"" << kTop + ph
      << "\" stroke=\"black\"/>\n";
    o << "<line x1=\"" << kLeft << "\" y1=\"" << kTop << "\" x2=\"" << kLeft << "\" y2=\"" << kTop + ph
      << "\" stroke=\"black\"/>\n";
    for (int k = 0; k <= 4; ++k) {
        const double yv = ymin + (ymax - ymin) * k / 4.0;
        const double xv = 1.0 + (static_cast<double>(xmax) - 1.0) * k / 4.0;
        o << "<text x=\"" << kLeft - 6 << "\" y=\"" << num(py(yv) + 4) << "\" text-anchor=\"end\">"
          << tick_label(yv) << "</text>\n";
        o << "<text x=\"" << num(px(xv)) << "\" y=\"" << kTop + ph + 18 << "\" text-anchor=\"middle\">"
          << tick_label(std::round(xv)) << "</text>\n";
    }
    o << "<text x=\"" << kLeft + pw / 2 << "\" y=\"" << kHeight - 10 << "\" text-anchor=\"middle\">"
      << escape(x_label) << "</text>\n";

    for (std::size_t s = 0; s < series.size(); ++s) {
        const auto& y = series[s].y;
        if (y.empty()) continue;
        const std::size_t stride = std::max<std::size_t>(1, y.size() / 1500);
        o << "<polyline fill=\"none\" stroke=\"" << kColors[s] << "\" stroke-width=\"1.5\" points=\"";
        for (std::size_t i = 0; i < y.size(); i += stride) {
            o << num(px(static_cast<double>(i + 1))) << ',' << num(py(y[i])) << ' ';
        }
        o << num(px(static_cast<double>(y.size()))) << ',' << num(py(y.back())) << "\"/>\n";
        const double ly = kTop + 14.0 + 16.0 * static_cast<double>(s);
        o << "<line x1=\"" << kLeft + 10 << "\" y1=\"" << ly - 4 << "\" x2=\"" << kLeft + 30 << "\" y2=\"" << ly - 4
          << "\" stroke=\"" << kColors[s] << "\" stroke-width=\"2\"/>\n";
        o << "<text x=\"" << kLeft + 36 << "\" y=\"" << ly << "\">" << escape(series[s].label) << "</text>\n";
    }
    o << "</svg>\n";
    return o.str();
}

}  // namespace confsel::svg
