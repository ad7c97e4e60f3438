#include <doctest.h>

#include <cmath>
#include <limits>
#include <vector>

#include "confsel/combi_acog.hpp"
#include "confsel/environments.hpp"
#include "confsel/oracles.hpp"

using namespace confsel;

namespace {

std::span<const std::size_t> prefix_of(const std::vector<std::size_t>& chain, std::size_t k) {
    return std::span<const std::size_t>(chain.data(), k);
}

}  // namespace

TEST_SUITE("combi_acog") {
    TEST_CASE("budget from theta") {
        CHECK(budget_from_theta(0.0, 5) == 0);
        CHECK(budget_from_theta(-2.3, 5) == 0);
        CHECK(budget_from_theta(0.01, 5) == 1);
        CHECK(budget_from_theta(2.0, 5) == 2);
        CHECK(budget_from_theta(2.5, 5) == 3);
        CHECK(budget_from_theta(17.0, 5) == 5);
        const auto b = BudgetState::initial(0.8, StepSchedule::constant(1.0));
        CHECK(b.theta.value == 0.0);
        CHECK(b.K == 0);
    }

    TEST_CASE("unplayed triples score +inf and ties go to the lowest index") {
        ChainStats stats(ChainKeying::PrefixKeyed, 4, 100);
        CHECK(stats.score(0, {}, 2) == std::numeric_limits<double>::infinity());
        CHECK(select_chain(stats, 3) == std::vector<std::size_t>{0, 1, 2});
        CHECK(select_chain(stats, 0).empty());
        CHECK_THROWS_AS(select_chain(stats, 5), InvalidInput);

        const ChainScore flat = [](std::size_t, std::span<const std::size_t>, std::size_t) { return 0.5; };
        CHECK(select_chain(flat, 3, 3) == std::vector<std::size_t>{0, 1, 2});
    }

    TEST_CASE("prefix keying distinguishes prefixes, position keying does not") {
        const std::vector<std::size_t> a = {0};
        const std::vector<std::size_t> b = {1};
        ChainStats pre(ChainKeying::PrefixKeyed, 3, 100);
        pre.record(1, a, 2, 0.4);
        CHECK(std::isfinite(pre.score(1, a, 2)));
        CHECK(pre.score(1, b, 2) == std::numeric_limits<double>::infinity());

        ChainStats pos(ChainKeying::PositionKeyed, 3, 100);
        pos.record(1, a, 2, 0.4);
        CHECK(std::isfinite(pos.score(1, b, 2)));
        CHECK(pos.score(0, {}, 2) == std::numeric_limits<double>::infinity());
    }

    TEST_CASE("score is mean plus sqrt(2 ln(nT)/plays)") {
        ChainStats s(ChainKeying::PositionKeyed, 2, 8);
        s.record(0, {}, 1, 1.0);
        s.record(0, {}, 1, 0.0);
        s.record(0, {}, 1, 1.0);
        s.record(0, {}, 1, 0.0);
        CHECK(s.score(0, {}, 1) == doctest::Approx(0.5 + 1.1774100225154747).epsilon(1e-14));
    }

    TEST_CASE("injected exact gains reproduce the greedy chain") {
        const std::vector<double> p = {0.1, 0.25, 0.05, 0.3, 0.2, 0.15};
        auto world = make_or_world(p, 1);
        const auto greedy = greedy_chain([&](std::span<const std::size_t> s) { return world->expected_value(s); }, p.size());
        for (auto keying : {ChainKeying::PrefixKeyed, ChainKeying::PositionKeyed}) {
            ChainStats stats(keying, p.size(), 1000, 0.0);
            for (std::size_t k = 0; k < p.size(); ++k) {
                const auto pre = prefix_of(greedy.chain, k);
                for (std::size_t i = 0; i < p.size(); ++i) {
                    bool used = false;
                    for (auto j : pre) used = used || j == i;
                    if (used) continue;
                    std::vector<std::size_t> with(pre.begin(), pre.end());
                    with.push_back(i);
                    stats.inject(k, pre, i, world->expected_value(with) - world->expected_value(pre));
                }
            }
            for (std::size_t K = 0; K <= p.size(); ++K) {
                const auto chain = select_chain(stats, K);
                CHECK(chain == std::vector<std::size_t>(greedy.chain.begin(), greedy.chain.begin() + K));
            }
        }
    }

    TEST_CASE("acog step records marginals and drives theta") {
        auto world = make_or_world({1.0, 1.0, 1.0}, 3);
        ChainStats stats(ChainKeying::PrefixKeyed, 3, 100);
        auto budget = BudgetState::initial(0.8, StepSchedule::constant(1.0));

        const auto first = acog_step(budget, stats, *world);
        CHECK(first.record.t == 1);
        CHECK(first.record.budget == 0);
        CHECK(first.record.reward == 0.0);
        CHECK(first.record.cost == 0.0);
        CHECK(budget.theta.value == doctest::Approx(0.8));
        CHECK(budget.K == 1);

        const auto second = acog_step(budget, stats, *world);
        CHECK(std::get<ChainAction>(second.record.action).arms == std::vector<std::size_t>{0});
        CHECK(second.record.reward == 1.0);
        CHECK(second.negative_marginals == 0);
        CHECK(budget.theta.value == doctest::Approx(0.6));
        CHECK(budget.K == 1);
        CHECK(std::isfinite(stats.score(0, {}, 0)));
        CHECK(second.record.extras.size() == acog_extra_columns().size());
    }

    TEST_CASE("acog on an OR world: coverage near phi") {
        const auto p = draw_or_probabilities(8, 0.05, 0.30, 12);
        auto world = make_or_world(p, 12);
        ChainStats stats(ChainKeying::PositionKeyed, p.size(), 5000);
        auto budget = BudgetState::initial(0.8, StepSchedule::constant(0.5));
        double sum = 0.0;
        for (int t = 0; t < 5000; ++t) sum += acog_step(budget, stats, *world).record.reward;
        CHECK(std::abs(sum / 5000.0 - 0.8) <= (std::abs(budget.theta.value) + 0.0) / (0.5 * 5000.0) + 1e-9);
    }
}
