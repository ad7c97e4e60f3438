#include "confsel/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <fstream>
#include <sstream>
#include <thread>
#include <variant>

#include "confsel/bandit_pd.hpp"
#include "confsel/combi_acog.hpp"
#include "confsel/environments.hpp"
#include "confsel/oracles.hpp"
#include "confsel/rng.hpp"
#include "confsel/svg.hpp"
#include "confsel/threshold_ctl.hpp"

namespace confsel {

using nlohmann::json;

ConfigError::ConfigError(std::size_t line, const std::string& message, std::string key)
    : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + message : message),
      line_(line),
      key_(std::move(key)) {}

// ---------------------------------------------------------------------------
// Config keys

namespace {

using Field = std::variant<std::string ExperimentConfig::*, std::int64_t ExperimentConfig::*,
                           std::uint64_t ExperimentConfig::*, double ExperimentConfig::*, bool ExperimentConfig::*>;

const std::vector<std::pair<std::string, Field>>& fields() {
    using C = ExperimentConfig;
    static const std::vector<std::pair<std::string, Field>> table = {
        {"preset", &C::preset},
        {"variant", &C::variant},
        {"algorithm", &C::algorithm},
        {"environment", &C::environment},
        {"T", &C::T},
        {"phi", &C::phi},
        {"schedule", &C::schedule},
        {"eta", &C::eta},
        {"decay_p", &C::decay_p},
        {"index_offset", &C::index_offset},
        {"seed", &C::seed},
        {"replicas", &C::replicas},
        {"output_dir", &C::output_dir},
        {"lambda_cap", &C::lambda_cap},
        {"delta", &C::delta},
        {"point_dist", &C::point_dist},
        {"beta_a", &C::beta_a},
        {"beta_b", &C::beta_b},
        {"trap_start", &C::trap_start},
        {"trap_end", &C::trap_end},
        {"tau_min", &C::tau_min},
        {"tau_max", &C::tau_max},
        {"tau_init", &C::tau_init},
        {"demand_before", &C::demand_before},
        {"demand_after", &C::demand_after},
        {"shift_t", &C::shift_t},
        {"demand_cap", &C::demand_cap},
        {"q_init", &C::q_init},
        {"dynamic_carryover", &C::dynamic_carryover},
        {"n_arms", &C::n_arms},
        {"p_low", &C::p_low},
        {"p_high", &C::p_high},
    };
    return table;
}

[[noreturn]] void bad(const std::string& key, const std::string& message) {
    throw ConfigError(0, key + ": " + message, key);
}

struct Assign {
    ExperimentConfig& cfg;
    const std::string& key;
    const json& v;

    void operator()(std::string ExperimentConfig::*m) const {
        if (!v.is_string()) bad(key, "expected a string");
        cfg.*m = v.get<std::string>();
    }
    void operator()(std::int64_t ExperimentConfig::*m) const {
        if (!v.is_number_integer()) bad(key, "expected an integer");
        cfg.*m = v.get<std::int64_t>();
    }
    void operator()(std::uint64_t ExperimentConfig::*m) const {
        if (!v.is_number_integer() || (!v.is_number_unsigned() && v.get<std::int64_t>() < 0)) bad(key, "expected a non-negative integer");
        cfg.*m = v.get<std::uint64_t>();
    }
    void operator()(double ExperimentConfig::*m) const {
        if (!v.is_number()) bad(key, "expected a number");
        cfg.*m = v.get<double>();
    }
    void operator()(bool ExperimentConfig::*m) const {
        if (!v.is_boolean()) bad(key, "expected true or false");
        cfg.*m = v.get<bool>();
    }
};

bool one_of(const std::string& s, std::initializer_list<const char*> options) {
    return std::any_of(options.begin(), options.end(), [&](const char* o) { return s == o; });
}

bool is_bandit(const std::string& a) { return a == "pd_bandit" || a == "pd_bandit_projected"; }
bool is_acog(const std::string& a) { return a == "acog_prefix" || a == "acog_position"; }

}  // namespace

StepSchedule ExperimentConfig::step_schedule() const {
    if (schedule == "constant") return StepSchedule::constant(eta);
    return StepSchedule::power_decay(eta, decay_p, index_offset);
}

void ExperimentConfig::validate() const {
    if (!one_of(algorithm, {"pd_bandit", "pd_bandit_projected", "primal_threshold", "newsvendor", "acog_prefix",
                            "acog_position"})) {
        bad("algorithm", "unknown algorithm '" + algorithm + "'");
    }
    if (!one_of(environment, {"interval", "trap", "score_uniform", "poisson", "or"})) {
        bad("environment", "unknown environment '" + environment + "'");
    }
    const bool ok = (is_bandit(algorithm) && one_of(environment, {"interval", "trap"})) ||
                    (algorithm == "primal_threshold" && environment == "score_uniform") ||
                    (algorithm == "newsvendor" && environment == "poisson") || (is_acog(algorithm) && environment == "or");
    if (!ok) bad("environment", "environment '" + environment + "' does not fit algorithm '" + algorithm + "'");
    if (T < 1) bad("T", "must be positive");
    if (!(phi > 0.0 && phi < 1.0)) bad("phi", "must lie in (0, 1)");
    if (!one_of(schedule, {"constant", "power_decay"})) bad("schedule", "expected constant or power_decay");
    if (!(eta > 0.0) || !std::isfinite(eta)) bad("eta", "must be positive");
    if (schedule == "power_decay" && !(decay_p >= 0.0 && decay_p < 1.0)) bad("decay_p", "must lie in [0, 1)");
    if (index_offset < 0) bad("index_offset", "must be non-negative");
    if (replicas < 1) bad("replicas", "must be at least 1");
    if (lambda_cap < 0.0) bad("lambda_cap", "must be non-negative");

    if (environment == "interval") {
        if (!one_of(point_dist, {"beta", "uniform"})) bad("point_dist", "expected beta or uniform");
        if (point_dist == "beta" && !(beta_a >= 1.0 && beta_b >= 1.0)) bad("beta_a", "Beta parameters must be >= 1");
        try {
            (void)discretize_intervals(delta);
        } catch (const std::exception& e) {
            bad("delta", e.what());
        }
    }
    if (environment == "trap" && !(trap_start >= 0 && trap_end > trap_start)) {
        bad("trap_end", "trap window needs 0 <= trap_start < trap_end");
    }
    if (environment == "score_uniform" && !(tau_max > tau_min)) bad("tau_max", "must exceed tau_min");
    if (environment == "poisson") {
        if (!(demand_before > 0.0 && demand_after > 0.0)) bad("demand_before", "Poisson rates must be positive");
        if (demand_cap < 1) bad("demand_cap", "must be at least 1");
        if (q_init < 0.0) bad("q_init", "must be non-negative");
        if (dynamic_carryover && !(step_schedule().at(1) < 1.0)) {
            bad("dynamic_carryover", "carry-over mode needs every step size below 1");
        }
    }
    if (environment == "or") {
        if (n_arms < 1) bad("n_arms", "must be positive");
        if (!(p_low >= 0.0 && p_high <= 1.0 && p_low <= p_high)) bad("p_low", "need 0 <= p_low <= p_high <= 1");
    }
}

json ExperimentConfig::to_json() const {
    json j = json::object();
    for (const auto& [name, field] : fields()) {
        std::visit([&](auto m) { j[name] = this->*m; }, field);
    }
    return j;
}

ExperimentConfig ExperimentConfig::from_json(const json& j) {
    if (!j.is_object()) throw ConfigError(0, "config must be a JSON object");
    ExperimentConfig cfg;
    for (const auto& [key, value] : j.items()) {
        const auto& table = fields();
        const auto it = std::find_if(table.begin(), table.end(), [&](const auto& f) { return f.first == key; });
        if (it == table.end()) bad(key, "unknown config key");
        std::visit(Assign{cfg, key, value}, it->second);
    }
    return cfg;
}

ExperimentConfig apply_overrides(const ExperimentConfig& cfg, const json& overrides) {
    if (overrides.is_null() || overrides.empty()) return cfg;
    json merged = cfg.to_json();
    for (const auto& [key, value] : overrides.items()) merged[key] = value;
    return ExperimentConfig::from_json(merged);
}

namespace {

std::size_t line_of_offset(const std::string& text, std::size_t offset) {
    offset = std::min(offset, text.size());
    return 1 + static_cast<std::size_t>(std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(offset), '\n'));
}

std::size_t line_of_key(const std::string& text, const std::string& key) {
    if (key.empty()) return 0;
    const auto pos = text.find('"' + key + '"');
    return pos == std::string::npos ? 0 : line_of_offset(text, pos);
}

}  // namespace

ExperimentConfig parse_config(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        const std::size_t at = e.byte > 0 ? e.byte - 1 : 0;
        std::string msg = e.what();
        const auto cut = msg.find("parse error");
        if (cut != std::string::npos) msg = msg.substr(cut);
        throw ConfigError(line_of_offset(text, at), msg);
    }
    try {
        auto cfg = ExperimentConfig::from_json(j);
        cfg.validate();
        return cfg;
    } catch (const ConfigError& e) {
        const std::size_t line = line_of_key(text, e.key());
        throw ConfigError(line, e.what(), e.key());
    }
}

ExperimentConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError(0, "cannot open config file " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    try {
        return parse_config(buf.str());
    } catch (const ConfigError& e) {
        throw ConfigError(0, path.string() + ":" + std::string(e.what()), e.key());
    }
}

// ---------------------------------------------------------------------------
// Presets

namespace {

ExperimentConfig interval_beta_base() {
    ExperimentConfig c;
    c.preset = "interval-beta";
    c.algorithm = "pd_bandit";
    c.environment = "interval";
    c.T = 25000;
    c.phi = 0.8;
    c.eta = 2.0 / std::sqrt(25000.0);
    c.delta = 0.05;
    c.point_dist = "beta";
    c.beta_a = 2.0;
    c.beta_b = 5.0;
    c.seed = 1;
    c.output_dir = "runs/interval-beta";
    return c;
}

std::string trim_real(double x) {
    std::ostringstream o;
    o << x;
    return o.str();
}

std::vector<Preset> build_catalog() {
    std::vector<Preset> out;

    out.push_back({"interval-beta", "interval selection bandit, Beta(2,5) points, T=25000, eta=2/sqrt(T)",
                   {interval_beta_base()}});

    {
        Preset p{"interval-eta-sweep", "interval-beta with eta in {0.01, 0.05, 0.2}", {}};
        for (double eta : {0.01, 0.05, 0.2}) {
            auto c = interval_beta_base();
            c.preset = p.name;
            c.variant = "eta_" + trim_real(eta);
            c.eta = eta;
            c.output_dir = "runs/" + p.name;
            p.variants.push_back(c);
        }
        out.push_back(p);
    }

    {
        Preset p{"adversarial-shift", "trap arm failing in the middle 25% of T=20000; boundary rule vs projected dual", {}};
        for (const char* algo : {"pd_bandit", "pd_bandit_projected"}) {
            ExperimentConfig c;
            c.preset = p.name;
            c.variant = std::string(algo) == "pd_bandit" ? "boundary" : "projected";
            c.algorithm = algo;
            c.environment = "trap";
            c.T = 20000;
            c.phi = 0.5;
            c.eta = 2.0 / std::sqrt(20000.0);
            c.lambda_cap = 2.0;
            c.trap_start = 7500;
            c.trap_end = 12500;
            c.seed = 1;
            c.output_dir = "runs/" + p.name;
            p.variants.push_back(c);
        }
        out.push_back(p);
    }

    {
        ExperimentConfig c;
        c.preset = "threshold-primal";
        c.algorithm = "primal_threshold";
        c.environment = "score_uniform";
        c.T = 10000;
        c.phi = 0.8;
        c.eta = 1.0 / std::sqrt(10000.0);
        c.tau_min = 0.0;
        c.tau_max = 1.0;
        c.tau_init = 0.0;
        c.seed = 1;
        c.output_dir = "runs/threshold-primal";
        out.push_back({c.preset, "primal threshold controller on the uniform score world, eta=1/sqrt(T)", {c}});
    }

    {
        Preset p{"threshold-decay", "primal threshold controller with eta_t = t^-p, p in {0.3, 0.5, 0.7}, T=50000", {}};
        for (double dp : {0.3, 0.5, 0.7}) {
            ExperimentConfig c;
            c.preset = p.name;
            c.variant = "p_" + trim_real(dp);
            c.algorithm = "primal_threshold";
            c.environment = "score_uniform";
            c.T = 50000;
            c.phi = 0.8;
            c.schedule = "power_decay";
            c.eta = 1.0;
            c.decay_p = dp;
            c.seed = 1;
            c.replicas = 20;
            c.output_dir = "runs/" + p.name;
            p.variants.push_back(c);
        }
        out.push_back(p);
    }

    {
        ExperimentConfig c;
        c.preset = "newsvendor-shift";
        c.algorithm = "newsvendor";
        c.environment = "poisson";
        c.T = 1000;
        c.phi = 0.9;
        c.schedule = "power_decay";
        c.eta = 5.0;
        c.decay_p = 0.5;
        c.index_offset = 1;
        c.demand_before = 20.0;
        c.demand_after = 50.0;
        c.shift_t = 500;
        c.demand_cap = 100;
        c.q_init = 20.0;
        c.seed = 1;
        c.replicas = 20;
        c.output_dir = "runs/newsvendor-shift";
        out.push_back({c.preset, "base-stock inventory, Poisson demand 20 -> 50 at t=500, eta_t=5/sqrt(t+1)", {c}});
    }

    {
        ExperimentConfig c;
        c.preset = "combinatorial-or";
        c.algorithm = "acog_position";
        c.environment = "or";
        c.T = 20000;
        c.phi = 0.8;
        c.n_arms = 20;
        c.eta = 20.0 / (2.0 * std::sqrt(20000.0));
        c.p_low = 0.05;
        c.p_high = 0.30;
        c.seed = 1;
        c.replicas = 20;
        c.output_dir = "runs/combinatorial-or";
        out.push_back({c.preset, "adaptive probing budget over an OR of n=20 arms, position-keyed greedy chain", {c}});
    }

    {
        Preset p{"regret-scaling", "interval-beta across T in {2000, ..., 32000}, 20 replicas each, log-log slope fit", {}};
        for (std::int64_t T : {2000, 4000, 8000, 16000, 32000}) {
            auto c = interval_beta_base();
            c.preset = p.name;
            c.variant = "T_" + std::to_string(T);
            c.T = T;
            c.eta = 2.0 / std::sqrt(static_cast<double>(T));
            c.replicas = 20;
            c.output_dir = "runs/" + p.name;
            p.variants.push_back(c);
        }
        out.push_back(p);
    }
    return out;
}

}  // namespace

const std::vector<Preset>& preset_catalog() {
    static const std::vector<Preset> catalog = build_catalog();
    return catalog;
}

const Preset& find_preset(const std::string& name) {
    for (const auto& p : preset_catalog()) {
        if (p.name == name) return p;
    }
    throw ConfigError(0, "unknown preset '" + name + "' (see list-presets)");
}

// ---------------------------------------------------------------------------
// Oracles per environment

namespace {

PointDist point_dist_of(const ExperimentConfig& cfg) {
    if (cfg.point_dist == "uniform") return UniformDist{};
    return BetaDist{cfg.beta_a, cfg.beta_b};
}

// Mean reward and cost per trap arm outside the failure window.
LpSolution trap_benchmark(double phi) {
    const std::vector<double> p = {0.0, 1.0, 1.0};
    const std::vector<double> w = {0.0, AdversarialTrap::kTrapCost, 1.0};
    return lp_benchmark(p, w, phi);
}

GreedyReport or_greedy(const OrWorld& world) {
    return greedy_chain([&world](std::span<const std::size_t> s) { return world.expected_value(s); },
                        world.ground_size());
}

// Each replica draws its own instance from its replica seed.
std::vector<double> or_probabilities(const ExperimentConfig& cfg, std::uint64_t replica_seed) {
    return draw_or_probabilities(static_cast<std::size_t>(cfg.n_arms), cfg.p_low, cfg.p_high, replica_seed);
}

json vector_json(const std::vector<double>& v) {
    json a = json::array();
    for (double x : v) a.push_back(x);
    return a;
}

}  // namespace

json oracle_json(const ExperimentConfig& cfg) {
    cfg.validate();
    json j;
    if (cfg.environment == "interval") {
        const auto b = interval_benchmark(cfg.delta, point_dist_of(cfg), cfg.phi);
        j["benchmark"] = "interval_benchmark";
        j["c_star"] = b.c_star;
        j["arm"] = b.arm;
        j["interval"] = {b.interval.lo, b.interval.hi};
        j["mass"] = b.mass;
        j["continuous_c_star"] = b.continuous_c_star;
        j["discretization_gap"] = b.gap;
    } else if (cfg.environment == "trap") {
        const auto lp = trap_benchmark(cfg.phi);
        j["benchmark"] = "lp_benchmark";
        j["c_star"] = lp.c_star;
        j["mixture"] = vector_json(lp.mixture);
        j["note"] = "arm means outside the failure window";
    } else if (cfg.environment == "score_uniform") {
        const auto lo = cfg.tau_min;
        const auto hi = cfg.tau_max;
        const auto r = [](double tau) { return std::clamp(tau, 0.0, 1.0); };
        const auto b = threshold_benchmark(r, r, lo, hi, cfg.phi);
        j["benchmark"] = "threshold_benchmark";
        j["tau_star"] = b.tau_star;
        j["c_star"] = b.c_star;
    } else if (cfg.environment == "poisson") {
        const auto d1 = truncated_poisson(cfg.demand_before, static_cast<int>(cfg.demand_cap));
        const auto d2 = truncated_poisson(cfg.demand_after, static_cast<int>(cfg.demand_cap));
        const auto b1 = newsvendor_benchmark(d1, cfg.phi);
        const auto b2 = newsvendor_benchmark(d2, cfg.phi);
        j["benchmark"] = "newsvendor_benchmark";
        j["phases"] = json::array({{{"until", cfg.shift_t}, {"q_star", b1.q_star}, {"mu", b1.mu}},
                                   {{"until", cfg.T}, {"q_star", b2.q_star}, {"mu", b2.mu}}});
    } else {
        const OrWorld world(or_probabilities(cfg, rng::replica_seed(cfg.seed, 0)), 0);
        const auto g = or_greedy(world);
        j["benchmark"] = "greedy_chain";
        j["instance"] = "replica 0";
        j["p"] = vector_json(world.probabilities());
        j["chain"] = g.chain;
        j["prefix_values"] = vector_json(g.prefix_values);
        j["k_star"] = g.budget_for(cfg.phi);
        j["c_star"] = static_cast<double>(g.budget_for(cfg.phi));
        j["gap_delta"] = g.gap_delta;
        j["budget_margin"] = g.budget_margin(cfg.phi);
        j["thin_margin"] = g.thin_margin(cfg.phi);
    }
    return j;
}

// ---------------------------------------------------------------------------
// Replicas

namespace {

void finish_report(ReplicaResult& r) {
    r.report = build_report(r.trace, r.benchmark);
    r.summary["coverage_final"] = r.report.coverage_final;
    r.summary["regret_final"] = r.report.regret_cum.back();
    r.summary["regret_pos_final"] = r.report.regret_pos_cum.back();
    r.summary["state_first"] = r.trace.rows.front().state;
    r.summary["state_last"] = r.trace.rows.back().state_next;
}

void run_bandit(const ExperimentConfig& cfg, ReplicaResult& r) {
    std::unique_ptr<ArmEnvironment> env;
    double c_star = 0.0;
    if (cfg.environment == "interval") {
        env = make_interval_world(cfg.delta, point_dist_of(cfg), r.seed);
        c_star = interval_benchmark(cfg.delta, point_dist_of(cfg), cfg.phi).c_star;
    } else {
        env = make_adversarial_trap(r.seed, cfg.trap_start, cfg.trap_end);
        c_star = trap_benchmark(cfg.phi).c_star;
    }
    const auto mode = cfg.algorithm == "pd_bandit" ? DualMode::BoundaryRule : DualMode::ProjectedBaseline;
    const auto bc = BanditConfig::for_environment(*env, cfg.phi, cfg.T, cfg.step_schedule(), mode, cfg.lambda_cap);
    auto state = BanditState::initial(bc);
    r.trace.extra_columns = bandit_extra_columns();
    r.trace.rows.reserve(static_cast<std::size_t>(cfg.T));
    for (std::int64_t t = 0; t < cfg.T; ++t) r.trace.rows.push_back(bandit_step(state, bc, *env));
    r.benchmark.assign(r.trace.size(), c_star);
    finish_report(r);
    r.summary["lambda_cap"] = bc.lambda_cap;
    r.summary["boundary_steps"] = r.report.boundary_steps;
    if (cfg.environment == "trap") {
        const auto end = std::min(cfg.trap_end, cfg.T);
        r.summary["coverage_at_window_end"] = r.report.coverage_cum[static_cast<std::size_t>(end - 1)];
    }
}

void run_threshold(const ExperimentConfig& cfg, ReplicaResult& r) {
    auto env = make_uniform_score_world(r.seed);
    const ThresholdConfig tc{cfg.tau_min, cfg.tau_max, cfg.phi, cfg.step_schedule()};
    tc.validate();
    auto tau = ControllerState::make(cfg.tau_init, cfg.phi, cfg.step_schedule());
    r.trace.extra_columns = threshold_extra_columns();
    r.trace.rows.reserve(static_cast<std::size_t>(cfg.T));
    for (std::int64_t t = 0; t < cfg.T; ++t) r.trace.rows.push_back(threshold_step(tau, tc, *env));
    const auto r_curve = [](double x) { return std::clamp(x, 0.0, 1.0); };
    const auto b = threshold_benchmark(r_curve, r_curve, cfg.tau_min, cfg.tau_max, cfg.phi);
    r.benchmark.assign(r.trace.size(), b.c_star);
    finish_report(r);
    // Expected per-step coverage error |r(tau_eff) - phi| over the final quarter.
    const std::size_t from = r.trace.size() - r.trace.size() / 4;
    double err = 0.0;
    for (std::size_t k = from; k < r.trace.size(); ++k) {
        err += std::abs(r_curve(std::get<ThresholdAction>(r.trace.rows[k].action).tau_eff) - cfg.phi);
    }
    r.summary["final_quarter_abs_error"] = err / static_cast<double>(r.trace.size() - from);
    r.summary["final_quarter_coverage"] =
        coverage_window(r.trace, static_cast<std::int64_t>(from) + 1, static_cast<std::int64_t>(r.trace.size()));
}

void run_newsvendor(const ExperimentConfig& cfg, ReplicaResult& r) {
    auto demand = make_poisson_demand(cfg.demand_before, cfg.demand_after, cfg.shift_t,
                                      static_cast<double>(cfg.demand_cap), r.seed);
    const NewsvendorConfig nc{static_cast<double>(cfg.demand_cap), cfg.phi, cfg.step_schedule(), cfg.dynamic_carryover};
    nc.validate();
    auto q = ControllerState::make(cfg.q_init, cfg.phi, cfg.step_schedule());
    const double q1 = newsvendor_benchmark(truncated_poisson(cfg.demand_before, static_cast<int>(cfg.demand_cap)), cfg.phi).q_star;
    const double q2 = newsvendor_benchmark(truncated_poisson(cfg.demand_after, static_cast<int>(cfg.demand_cap)), cfg.phi).q_star;
    r.trace.extra_columns = newsvendor_extra_columns();
    r.trace.rows.reserve(static_cast<std::size_t>(cfg.T));
    std::int64_t violations = 0;
    std::int64_t checked = 0;
    const auto leftover_col = r.trace.extra_columns.size() - 1;
    for (std::int64_t t = 1; t <= cfg.T; ++t) {
        const double eta = q.current_eta();
        r.trace.rows.push_back(newsvendor_step(q, nc, demand->next()));
        r.benchmark.push_back(t <= cfg.shift_t ? q1 : q2);
        if (eta > 0.0 && eta < 1.0) {
            ++checked;
            const auto& row = r.trace.rows.back();
            if (row.state_next < row.extras[leftover_col]) ++violations;
        }
    }
    finish_report(r);
    r.summary["fill_rate"] = fill_rate(r.trace);
    r.summary["no_returns_checked_steps"] = checked;
    r.summary["no_returns_violations"] = violations;
}

void run_acog(const ExperimentConfig& cfg, ReplicaResult& r) {
    auto world = make_or_world(or_probabilities(cfg, r.seed), r.seed);
    const auto greedy = or_greedy(*world);
    const std::size_t k_star = greedy.budget_for(cfg.phi);
    const auto keying = cfg.algorithm == "acog_prefix" ? ChainKeying::PrefixKeyed : ChainKeying::PositionKeyed;
    ChainStats stats(keying, world->ground_size(), cfg.T);
    auto budget = BudgetState::initial(cfg.phi, cfg.step_schedule());
    r.trace.extra_columns = acog_extra_columns();
    r.trace.rows.reserve(static_cast<std::size_t>(cfg.T));
    std::int64_t negative = 0;
    for (std::int64_t t = 0; t < cfg.T; ++t) {
        auto out = acog_step(budget, stats, *world);
        negative += static_cast<std::int64_t>(out.negative_marginals);
        r.trace.rows.push_back(std::move(out.record));
    }
    r.benchmark.assign(r.trace.size(), static_cast<double>(k_star));
    finish_report(r);
    r.report.greedy_deviation = deviation_counter(r.trace, greedy);
    std::int64_t excess = 0;
    std::int64_t excess_late = 0;
    for (const auto& row : r.trace.rows) {
        if (row.budget > static_cast<int>(k_star) + 1) {
            ++excess;
            if (row.t > cfg.T / 2) ++excess_late;
        }
    }
    r.summary["k_star"] = k_star;
    r.summary["budget_margin"] = greedy.budget_margin(cfg.phi);
    r.summary["excess_budget_steps"] = excess;
    r.summary["excess_budget_steps_late"] = excess_late;
    r.summary["greedy_deviation_steps"] = r.report.greedy_deviation->set_based;
    r.summary["greedy_deviation_steps_ordered"] = r.report.greedy_deviation->order_based;
    r.summary["negative_marginals"] = negative;
}

}  // namespace

ReplicaResult run_replica(const ExperimentConfig& cfg, std::size_t index) {
    cfg.validate();
    ReplicaResult r;
    r.index = index;
    r.seed = rng::replica_seed(cfg.seed, index);
    r.summary = json::object();
    if (is_bandit(cfg.algorithm)) {
        run_bandit(cfg, r);
    } else if (cfg.algorithm == "primal_threshold") {
        run_threshold(cfg, r);
    } else if (cfg.algorithm == "newsvendor") {
        run_newsvendor(cfg, r);
    } else {
        run_acog(cfg, r);
    }
    return r;
}

RunResult run_experiment(const ExperimentConfig& cfg, std::size_t jobs) {
    cfg.validate();
    RunResult run;
    run.config = cfg;
    run.oracle = oracle_json(cfg);
    const auto count = static_cast<std::size_t>(cfg.replicas);
    run.replicas.resize(count);
    std::vector<std::exception_ptr> errors(count);
    std::atomic<std::size_t> next{0};
    const auto worker = [&] {
        for (std::size_t k = next++; k < count; k = next++) {
            try {
                run.replicas[k] = run_replica(cfg, k);
            } catch (...) {
                errors[k] = std::current_exception();
            }
        }
    };
    const std::size_t threads = std::clamp<std::size_t>(jobs, 1, count);
    if (threads == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (std::size_t w = 0; w < threads; ++w) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }
    for (const auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }
    return run;
}

// ---------------------------------------------------------------------------
// Output

std::string trace_csv(const ReplicaResult& r) {
    std::string out = "t,action,reward,cost,state,K,coverage_cum,regret_cum,regret_pos_cum";
    for (const auto& c : r.trace.extra_columns) out += ',' + c;
    out += '\n';
    for (std::size_t k = 0; k < r.trace.size(); ++k) {
        const auto& row = r.trace.rows[k];
        out += std::to_string(row.t);
        out += ',' + describe(row.action);
        out += ',' + format_real(row.reward);
        out += ',' + format_real(row.cost);
        out += ',' + format_real(row.state);
        out += ',';
        if (row.budget >= 0) out += std::to_string(row.budget);
        out += ',' + format_real(r.report.coverage_cum[k]);
        out += ',' + format_real(r.report.regret_cum[k]);
        out += ',' + format_real(r.report.regret_pos_cum[k]);
        for (double x : row.extras) out += ',' + format_real(x);
        out += '\n';
    }
    return out;
}

namespace {

json mean_stderr(const std::vector<double>& v) {
    double mean = 0.0;
    for (double x : v) mean += x;
    mean /= static_cast<double>(v.size());
    double ss = 0.0;
    for (double x : v) ss += (x - mean) * (x - mean);
    const double n = static_cast<double>(v.size());
    const double se = v.size() > 1 ? std::sqrt(ss / (n - 1.0) / n) : 0.0;
    return {{"mean", mean}, {"stderr", se}};
}

json aggregate(const std::vector<ReplicaResult>& reps) {
    json agg = json::object();
    for (const auto& [key, value] : reps.front().summary.items()) {
        if (!value.is_number()) continue;
        std::vector<double> xs;
        for (const auto& r : reps) xs.push_back(r.summary.at(key).get<double>());
        agg[key] = mean_stderr(xs);
    }
    return agg;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << text;
}

}  // namespace

json metrics_json(const RunResult& run) {
    json j;
    j["preset"] = run.config.preset;
    j["variant"] = run.config.variant;
    j["algorithm"] = run.config.algorithm;
    j["oracle"] = run.oracle;
    json reps = json::array();
    for (const auto& r : run.replicas) {
        json e = r.report.to_json();
        e["replica"] = r.index;
        e["seed"] = r.seed;
        e["summary"] = r.summary;
        reps.push_back(e);
    }
    j["replicas"] = reps;
    j["aggregate"] = aggregate(run.replicas);
    return j;
}

void write_artifacts(const RunResult& run, const std::filesystem::path& dir, bool plot) {
    std::filesystem::create_directories(dir);
    auto cfg = run.config;
    cfg.output_dir = dir.generic_string();
    write_text(dir / "config.json", cfg.to_json().dump(2) + "\n");
    for (const auto& r : run.replicas) {
        write_text(dir / ("trace_" + std::to_string(r.index) + ".csv"), trace_csv(r));
    }
    write_text(dir / "metrics.json", metrics_json(run).dump(2) + "\n");
    if (plot) {
        const auto& r0 = run.replicas.front();
        const std::string tag = run.config.preset + (run.config.variant.empty() ? "" : " / " + run.config.variant);
        std::vector<double> target(r0.report.coverage_cum.size(), run.config.phi);
        write_text(dir / "coverage.svg",
                   svg::line_chart("cumulative coverage, " + tag, "t",
                                   {{"coverage (replica 0)", r0.report.coverage_cum}, {"target phi", target}}));
        write_text(dir / "regret.svg", svg::line_chart("cumulative regret, " + tag, "t",
                                                       {{"regret", r0.report.regret_cum},
                                                        {"positive-part regret", r0.report.regret_pos_cum}}));
    }
}

json preset_summary(const Preset& preset, const std::vector<RunResult>& runs) {
    json j;
    j["preset"] = preset.name;
    json vars = json::array();
    for (const auto& run : runs) {
        vars.push_back({{"variant", run.config.variant}, {"T", run.config.T}, {"aggregate", aggregate(run.replicas)}});
    }
    j["variants"] = vars;
    if (preset.name == "regret-scaling") {
        std::vector<std::pair<double, double>> pts;
        for (const auto& run : runs) {
            pts.emplace_back(static_cast<double>(run.config.T), aggregate(run.replicas)["regret_final"]["mean"].get<double>());
        }
        j["slope_fit"] = to_json(sublinearity_fit(pts));
    }
    return j;
}

std::vector<std::filesystem::path> run_preset(const Preset& preset, const std::filesystem::path& out_dir,
                                              std::size_t jobs, bool plot, const json& overrides) {
    std::vector<std::filesystem::path> dirs;
    std::vector<RunResult> runs;
    for (const auto& base : preset.variants) {
        auto cfg = apply_overrides(base, overrides);
        cfg.validate();
        const auto dir = preset.variants.size() == 1 ? out_dir : out_dir / cfg.variant;
        auto run = run_experiment(cfg, jobs);
        write_artifacts(run, dir, plot);
        dirs.push_back(dir);
        // Only the scalar summaries feed the preset summary.
        for (auto& r : run.replicas) {
            r.trace = Trace{};
            r.benchmark.clear();
            r.report = MetricsReport{};
        }
        runs.push_back(std::move(run));
    }
    if (preset.variants.size() > 1) {
        std::filesystem::create_directories(out_dir);
        write_text(out_dir / "summary.json", preset_summary(preset, runs).dump(2) + "\n");
    }
    return dirs;
}

}  // namespace confsel
