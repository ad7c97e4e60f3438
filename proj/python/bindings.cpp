#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <span>
#include <string>
#include <vector>

#include "confsel/core_control.hpp"
#include "confsel/environments.hpp"
#include "confsel/harness.hpp"
#include "confsel/metrics.hpp"
#include "confsel/oracles.hpp"

namespace py = pybind11;
using namespace confsel;

namespace {

// JSON crosses the boundary as text; the Python side decodes it.
std::string run_config_json(const std::string& text, std::size_t jobs) {
    const auto cfg = parse_config(text);
    return metrics_json(run_experiment(cfg, jobs)).dump();
}

std::vector<std::string> preset_names() {
    std::vector<std::string> out;
    for (const auto& p : preset_catalog()) out.push_back(p.name);
    return out;
}

std::vector<std::string> preset_configs(const std::string& name) {
    std::vector<std::string> out;
    for (const auto& v : find_preset(name).variants) out.push_back(v.to_json().dump());
    return out;
}

PointDist dist_of(const std::string& kind, double a, double b) {
    if (kind == "uniform") return UniformDist{};
    if (kind == "beta") return BetaDist{a, b};
    throw InvalidInput("point distribution must be 'beta' or 'uniform'");
}

}  // namespace

PYBIND11_MODULE(_confsel, m) {
    m.doc() = "Online coverage controllers, benchmarks and experiment runner";

    py::register_exception<InvalidInput>(m, "InvalidInput", PyExc_ValueError);
    py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
    py::register_exception<InfeasibleBenchmark>(m, "InfeasibleBenchmark", PyExc_RuntimeError);

    m.def(
        "aci_path",
        [](double start, double phi, double eta, const std::vector<double>& rewards) {
            auto s = ControllerState::make(start, phi, StepSchedule::constant(eta));
            std::vector<double> out;
            out.reserve(rewards.size());
            for (double y : rewards) {
                s = aci_update(s, y);
                out.push_back(s.value);
            }
            return out;
        },
        py::arg("start"), py::arg("phi"), py::arg("eta"), py::arg("rewards"),
        "States after each update state += eta (phi - y).");

    m.def("coverage_bound", &coverage_bound, py::arg("state_range"), py::arg("eta"), py::arg("length"));

    m.def(
        "lp_benchmark",
        [](const std::vector<double>& p, const std::vector<double>& omega, double phi) {
            const auto s = lp_benchmark(p, omega, phi);
            return py::make_tuple(s.c_star, s.mixture);
        },
        py::arg("p"), py::arg("omega"), py::arg("phi"), "(c_star, mixture)");

    m.def(
        "interval_benchmark",
        [](double delta, double phi, const std::string& dist, double a, double b) {
            const auto r = interval_benchmark(delta, dist_of(dist, a, b), phi);
            py::dict d;
            d["c_star"] = r.c_star;
            d["interval"] = py::make_tuple(r.interval.lo, r.interval.hi);
            d["mass"] = r.mass;
            d["continuous_c_star"] = r.continuous_c_star;
            d["gap"] = r.gap;
            return d;
        },
        py::arg("delta"), py::arg("phi"), py::arg("dist") = "beta", py::arg("a") = 2.0, py::arg("b") = 5.0);

    m.def("point_cdf",
          [](double y, const std::string& dist, double a, double b) { return point_cdf(dist_of(dist, a, b), y); },
          py::arg("y"), py::arg("dist") = "beta", py::arg("a") = 2.0, py::arg("b") = 5.0);

    m.def(
        "newsvendor_benchmark",
        [](const std::vector<double>& values, const std::vector<double>& probs, double phi) {
            const auto r = newsvendor_benchmark(DiscreteDemand{values, probs}, phi);
            return py::make_tuple(r.q_star, r.mu);
        },
        py::arg("values"), py::arg("probs"), py::arg("phi"), "(q_star, mu)");

    m.def(
        "poisson_newsvendor_benchmark",
        [](double lambda, int cap, double phi) {
            const auto r = newsvendor_benchmark(truncated_poisson(lambda, cap), phi);
            return py::make_tuple(r.q_star, r.mu);
        },
        py::arg("lam"), py::arg("cap"), py::arg("phi"));

    m.def(
        "greedy_or_chain",
        [](const std::vector<double>& p, double phi) {
            auto w = make_or_world(p, 0);
            const auto g = greedy_chain([&](std::span<const std::size_t> s) { return w->expected_value(s); }, p.size());
            py::dict d;
            d["chain"] = g.chain;
            d["prefix_values"] = g.prefix_values;
            d["k_star"] = g.budget_for(phi);
            d["gap_delta"] = g.gap_delta;
            return d;
        },
        py::arg("p"), py::arg("phi"));

    m.def(
        "sublinearity_fit",
        [](const std::vector<std::pair<double, double>>& pts) {
            const auto f = sublinearity_fit(pts);
            return py::make_tuple(f.slope, f.r2, f.clipped);
        },
        py::arg("points"), "(slope, r2, clipped)");

    m.def("preset_names", &preset_names);
    m.def("preset_configs", &preset_configs, py::arg("name"), "Variant configs as JSON text.");
    m.def(
        "oracle_json", [](const std::string& text) { return oracle_json(parse_config(text)).dump(); }, py::arg("config"));
    m.def("run_config_json", &run_config_json, py::arg("config"), py::arg("jobs") = 1,
          py::call_guard<py::gil_scoped_release>(), "Run a JSON config; returns metrics as JSON text.");
    m.def(
        "run_trace_csv",
        [](const std::string& text, std::size_t replica) {
            const auto cfg = parse_config(text);
            return trace_csv(run_replica(cfg, replica));
        },
        py::arg("config"), py::arg("replica") = 0, py::call_guard<py::gil_scoped_release>());
}
