#include "confsel/trace.hpp"

#include <cstdio>
#include <stdexcept>

namespace confsel {

std::string format_real(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

namespace {

struct Describer {
    std::string operator()(const ArmAction& a) const { return std::to_string(a.arm); }
    std::string operator()(const ThresholdAction& a) const { return format_real(a.tau_eff); }
    std::string operator()(const InventoryAction& a) const { return format_real(a.q_eff); }
    std::string operator()(const ChainAction& a) const {
        std::string out;
        for (std::size_t k = 0; k < a.arms.size(); ++k) {
            if (k > 0) out += '-';
            out += std::to_string(a.arms[k]);
        }
        return out;
    }
};

}  // namespace

std::string describe(const Action& action) { return std::visit(Describer{}, action); }

std::size_t Trace::extra_index(const std::string& name) const {
    for (std::size_t i = 0; i < extra_columns.size(); ++i) {
        if (extra_columns[i] == name) return i;
    }
    throw std::out_of_range("trace has no column '" + name + "'");
}

double Trace::extra(std::size_t row, const std::string& name) const {
    return rows.at(row).extras.at(extra_index(name));
}

}  // namespace confsel
