#include <doctest.h>

#include <cmath>
#include <type_traits>
#include <vector>

#include "confsel/core_control.hpp"
#include "confsel/environments.hpp"

using namespace confsel;

TEST_SUITE("environments") {
    TEST_CASE("feedback bundle holds only reward and cost") {
        CHECK(sizeof(Feedback) == 2 * sizeof(double));
        CHECK(std::is_aggregate_v<Feedback>);
    }

    TEST_CASE("iid arms: degenerate arms and appended boundary arms") {
        auto w = make_iid_arms({ArmSpec{0.3, FixedCost{0.2}}}, 1.0, 7);
        REQUIRE(w->arm_count() == 3);
        CHECK(w->means()[w->null_arm()] == 0.0);
        CHECK(w->means()[w->full_arm()] == 1.0);
        for (int k = 0; k < 200; ++k) {
            const auto z = w->pull(w->null_arm());
            CHECK(z.reward == 0.0);
            CHECK(z.cost == 0.0);
            const auto f = w->pull(w->full_arm());
            CHECK(f.reward == 1.0);
            CHECK(f.cost == 1.0);
        }
    }

    TEST_CASE("iid arms: empirical mean concentrates") {
        auto w = make_iid_arms({ArmSpec{0.0, FixedCost{0.0}}, ArmSpec{0.3, FixedCost{0.5}}, ArmSpec{1.0, FixedCost{1.0}}},
                               1.0, 11);
        const int n = 100000;
        double sum = 0.0;
        for (int k = 0; k < n; ++k) sum += w->pull(1).reward;
        CHECK(std::abs(sum / n - 0.3) <= 3.0 * std::sqrt(0.3 * 0.7 / n));
    }

    TEST_CASE("iid arms: stochastic cost keeps its mean") {
        auto w = make_iid_arms({ArmSpec{0.5, StochasticCost{0.25, 1.0}}}, 1.0, 3);
        const int n = 100000;
        double sum = 0.0;
        for (int k = 0; k < n; ++k) {
            const auto fb = w->pull(0);
            CHECK((fb.cost == 0.0 || fb.cost == 1.0));
            sum += fb.cost;
        }
        CHECK(std::abs(sum / n - 0.25) <= 4.0 * std::sqrt(0.25 * 0.75 / n));
    }

    TEST_CASE("iid arms: invalid p rejected") {
        CHECK_THROWS_AS(make_iid_arms({ArmSpec{1.5, FixedCost{0.1}}}, 1.0, 1), InvalidInput);
        CHECK_THROWS_AS(make_iid_arms({}, 1.0, 1), InvalidInput);
    }

    TEST_CASE("replay determinism") {
        auto a = make_interval_world(0.05, BetaDist{2.0, 5.0}, 99);
        auto b = make_interval_world(0.05, BetaDist{2.0, 5.0}, 99);
        for (std::size_t k = 0; k < 500; ++k) {
            const std::size_t arm = (k * 37) % a->arm_count();
            const auto fa = a->pull(arm);
            const auto fb = b->pull(arm);
            CHECK(fa.reward == fb.reward);
            CHECK(fa.cost == fb.cost);
            CHECK(a->debug_last_point() == b->debug_last_point());
        }
    }

    TEST_CASE("interval world arms") {
        auto w = make_interval_world(0.05, BetaDist{2.0, 5.0}, 5);
        for (int k = 0; k < 100; ++k) {
            const auto full = w->pull(w->full_arm());
            CHECK(full.reward == 1.0);
            CHECK(full.cost == 1.0);
            const auto empty = w->pull(w->null_arm());
            CHECK(empty.reward == 0.0);
            CHECK(empty.cost == 0.0);
        }
        CHECK_THROWS_AS(make_interval_world(0.3, UniformDist{}, 1), InvalidInput);
    }

    TEST_CASE("Beta(2,5) CDF") {
        // Closed form 1 - (1-x)^6 - 6x(1-x)^5 at 0.45.
        CHECK(point_cdf(BetaDist{2.0, 5.0}, 0.45) == doctest::Approx(0.8364325781249999).epsilon(1e-10));
        CHECK(point_cdf(BetaDist{2.0, 5.0}, 0.0) == 0.0);
        CHECK(point_cdf(BetaDist{2.0, 5.0}, 1.0) == 1.0);
        CHECK(point_cdf(UniformDist{}, 0.3) == doctest::Approx(0.3));
        for (double x = 0.05; x < 1.0; x += 0.05) {
            const double closed = 1.0 - std::pow(1.0 - x, 6) - 6.0 * x * std::pow(1.0 - x, 5);
            CHECK(point_cdf(BetaDist{2.0, 5.0}, x) == doctest::Approx(closed).epsilon(1e-10));
        }
    }

    TEST_CASE("Beta(2,5) sampling matches the CDF") {
        const rng::Stream s(2024, rng::Component::IntervalPoint);
        const int n = 100000;
        int below = 0;
        for (int k = 0; k < n; ++k) below += sample_point(BetaDist{2.0, 5.0}, s, k) <= 0.45 ? 1 : 0;
        const double p = 0.8364325781249999;
        CHECK(std::abs(static_cast<double>(below) / n - p) <= 4.0 * std::sqrt(p * (1 - p) / n));
        // Non-integer parameters use the gamma route.
        int below2 = 0;
        for (int k = 0; k < 20000; ++k) below2 += sample_point(BetaDist{2.5, 2.5}, s, k) <= 0.5 ? 1 : 0;
        CHECK(std::abs(below2 / 20000.0 - 0.5) <= 0.015);
    }

    TEST_CASE("interval arm success rate") {
        auto w = make_interval_world(0.05, BetaDist{2.0, 5.0}, 17);
        std::size_t arm = 0;
        for (std::size_t k = 0; k < w->arms().size(); ++k) {
            const auto& iv = w->arms()[k];
            if (!iv.empty && iv.lo == 0.0 && std::abs(iv.hi - 0.45) < 1e-12) arm = k;
        }
        REQUIRE(arm != 0);
        const int n = 50000;
        double sum = 0.0;
        for (int k = 0; k < n; ++k) sum += w->pull(arm).reward;
        const double p = 0.8364325781249999;
        CHECK(std::abs(sum / n - p) <= 4.0 * std::sqrt(p * (1 - p) / n));
    }

    TEST_CASE("adversarial trap") {
        AdversarialTrap trap(5, 10);
        for (std::int64_t t = 1; t <= 15; ++t) {
            const auto fb = trap.pull(AdversarialTrap::kTrap);
            CHECK(fb.cost == doctest::Approx(0.05));
            CHECK(fb.reward == ((t > 5 && t <= 10) ? 0.0 : 1.0));
        }
        AdversarialTrap t2(0, 3);
        CHECK(t2.pull(AdversarialTrap::kSafe).reward == 1.0);
        CHECK(t2.pull(AdversarialTrap::kSafe).cost == 1.0);
        CHECK(t2.pull(AdversarialTrap::kZero).reward == 0.0);
        CHECK(t2.null_arm() == AdversarialTrap::kZero);
        CHECK(t2.full_arm() == AdversarialTrap::kSafe);
    }

    TEST_CASE("uniform score world") {
        auto w = make_uniform_score_world(8);
        CHECK(w->respond(1.0).reward == 1.0);
        int hits = 0;
        const int n = 100000;
        for (int k = 0; k < n; ++k) {
            const auto fb = w->respond(0.8);
            hits += fb.reward == 1.0 ? 1 : 0;
            CHECK(fb.cost == 0.8);
        }
        CHECK(std::abs(hits / static_cast<double>(n) - 0.8) <= 4.0 * std::sqrt(0.16 / n));
        int low = 0;
        for (int k = 0; k < 1000; ++k) low += w->respond(0.0).reward == 1.0 ? 1 : 0;
        CHECK(low == 0);
    }

    TEST_CASE("score world: Y is a single step in tau for fixed context") {
        // Two worlds with the same seed see the same hidden tau_x.
        for (int k = 0; k < 200; ++k) {
            auto a = make_uniform_score_world(300 + k);
            auto b = make_uniform_score_world(300 + k);
            (void)a->respond(0.5);
            const double tx = a->debug_last_tau_x();
            CHECK(b->respond(tx).reward == 1.0);
            if (tx > 1e-9) {
                auto c = make_uniform_score_world(300 + k);
                CHECK(c->respond(tx - 1e-9).reward == 0.0);
            }
        }
    }

    TEST_CASE("discretized threshold arms") {
        DiscretizedThresholdArms arms(make_uniform_score_world(4), {0.0, 0.5, 1.0}, 1.0);
        CHECK(arms.arm_count() == 3);
        CHECK(arms.pull(2).reward == 1.0);
        CHECK(arms.pull(0).reward == 0.0);
    }

    TEST_CASE("poisson demand clamps") {
        CHECK(poisson_inverse(20.0, 0.0) == 0);
        CHECK(poisson_inverse(20.0, 0.5) == 20);
        auto lo = make_poisson_demand(0.01, 0.01, 10, 100.0, 1);
        for (int k = 0; k < 100; ++k) CHECK(lo->next() == 1.0);
        auto hi = make_poisson_demand(500.0, 500.0, 10, 100.0, 1);
        for (int k = 0; k < 100; ++k) CHECK(hi->next() == 100.0);
    }

    TEST_CASE("poisson demand mean and shift") {
        auto d = make_poisson_demand(20.0, 50.0, 100000, 100.0, 42);
        const int n = 100000;
        double sum = 0.0;
        for (int k = 0; k < n; ++k) sum += d->next();
        CHECK(std::abs(sum / n - 20.0) <= 3.0 * std::sqrt(20.0 / n));
        CHECK(d->rate_at(100000) == 20.0);
        CHECK(d->rate_at(100001) == 50.0);
    }

    TEST_CASE("OR world") {
        auto w = make_or_world({0.5, 0.5, 0.5}, 9);
        const std::vector<std::size_t> chain = {0, 1, 2};
        CHECK(w->expected_value(std::span<const std::size_t>(chain.data(), 1)) == doctest::Approx(0.5));
        CHECK(w->expected_value(std::span<const std::size_t>(chain.data(), 2)) == doctest::Approx(0.75));
        CHECK(w->expected_value(chain) == doctest::Approx(0.875));
        const int n = 100000;
        std::vector<double> sums(4, 0.0);
        for (int k = 0; k < n; ++k) {
            const auto v = w->probe(chain);
            REQUIRE(v.size() == 4);
            CHECK(v[0] == 0.0);
            for (std::size_t j = 1; j < v.size(); ++j) CHECK(v[j] >= v[j - 1]);
            for (std::size_t j = 0; j < 4; ++j) sums[j] += v[j];
        }
        const double expect[] = {0.0, 0.5, 0.75, 0.875};
        for (std::size_t j = 1; j < 4; ++j) {
            const double p = expect[j];
            CHECK(std::abs(sums[j] / n - p) <= 3.0 * std::sqrt(p * (1 - p) / n));
        }
        auto sure = make_or_world({1.0}, 1);
        const std::vector<std::size_t> one = {0};
        CHECK(sure->probe(one)[1] == 1.0);
        CHECK(sure->probe({})[0] == 0.0);
    }

    TEST_CASE("OR probabilities reproducible from the seed") {
        const auto a = draw_or_probabilities(20, 0.05, 0.30, 77);
        const auto b = draw_or_probabilities(20, 0.05, 0.30, 77);
        const auto c = draw_or_probabilities(20, 0.05, 0.30, 78);
        CHECK(a == b);
        CHECK(a != c);
        for (double p : a) CHECK((p >= 0.05 && p <= 0.30));
    }
}
