#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "confsel/environments.hpp"
#include "confsel/threshold_ctl.hpp"

using namespace confsel;

TEST_SUITE("threshold_ctl") {
    TEST_CASE("threshold step clamps the action, not the state") {
        auto env = make_uniform_score_world(1);
        const ThresholdConfig cfg{0.0, 1.0, 0.8, StepSchedule::constant(0.5)};
        auto tau = ControllerState::make(1.7, 0.8, cfg.schedule);
        const auto rec = threshold_step(tau, cfg, *env);
        CHECK(std::get<ThresholdAction>(rec.action).tau_eff == 1.0);
        CHECK(rec.reward == 1.0);
        CHECK(rec.state == 1.7);
        CHECK(tau.value == doctest::Approx(1.7 + 0.5 * (0.8 - 1.0)));
        CHECK(rec.extras[0] == 1.0);

        auto low = ControllerState::make(-0.3, 0.8, cfg.schedule);
        const auto r2 = threshold_step(low, cfg, *env);
        CHECK(std::get<ThresholdAction>(r2.action).tau_eff == 0.0);
        CHECK(r2.reward == 0.0);
        CHECK(low.value == doctest::Approx(-0.3 + 0.4));
    }

    TEST_CASE("threshold stays within [tau_min - eta, tau_max + eta]") {
        auto env = make_uniform_score_world(2);
        const double eta = 0.05;
        const ThresholdConfig cfg{0.0, 1.0, 0.8, StepSchedule::constant(eta)};
        auto tau = ControllerState::make(0.0, 0.8, cfg.schedule);
        bool ok = true;
        double sum = 0.0;
        for (int t = 0; t < 20000; ++t) {
            const auto r = threshold_step(tau, cfg, *env);
            sum += r.reward;
            ok = ok && tau.value >= -eta && tau.value <= 1.0 + eta;
        }
        CHECK(ok);
        CHECK(std::abs(sum / 20000.0 - 0.8) <= (1.0 + 2 * eta) / (eta * 20000.0) + 1e-12);
    }

    TEST_CASE("newsvendor step") {
        const NewsvendorConfig cfg{100.0, 0.9, StepSchedule::constant(0.5), false};
        auto q = ControllerState::make(20.0, 0.9, cfg.schedule);
        const auto r = newsvendor_step(q, cfg, 25.0);
        CHECK(std::get<InventoryAction>(r.action).q_eff == 20.0);
        CHECK(r.extras[1] == 20.0);  // fulfilled
        CHECK(r.extras[3] == 0.0);   // leftover
        CHECK(r.reward == doctest::Approx(0.8));
        CHECK(q.value == doctest::Approx(20.0 + 0.5 * (0.9 * 25.0 - 20.0)));

        auto big = ControllerState::make(150.0, 0.9, cfg.schedule);
        const auto r2 = newsvendor_step(big, cfg, 30.0);
        CHECK(std::get<InventoryAction>(r2.action).q_eff == 100.0);
        CHECK(r2.extras[3] == 70.0);
        CHECK(r2.cost == 100.0);
    }

    TEST_CASE("newsvendor demand validation") {
        const NewsvendorConfig cfg{100.0, 0.9, StepSchedule::constant(0.5), false};
        auto q = ControllerState::make(20.0, 0.9, cfg.schedule);
        CHECK_THROWS_AS(newsvendor_step(q, cfg, 0.0), InvalidInput);
        CHECK_THROWS_AS(newsvendor_step(q, cfg, 101.0), InvalidInput);
    }

    TEST_CASE("carry-over mode requires eta < 1") {
        NewsvendorConfig cfg{100.0, 0.9, StepSchedule::power_decay(5.0, 0.5, 1), true};
        CHECK_THROWS_AS(cfg.validate(), InvalidInput);
        cfg.schedule = StepSchedule::constant(0.9);
        CHECK_NOTHROW(cfg.validate());
    }

    TEST_CASE("no-returns identity along a carry-over run") {
        // q' - leftover = y (1 - eta) + eta phi a >= 0 for eta in (0, 1).
        const NewsvendorConfig cfg{100.0, 0.9, StepSchedule::constant(0.6), true};
        auto demand = make_poisson_demand(20.0, 50.0, 300, 100.0, 5);
        auto q = ControllerState::make(80.0, 0.9, cfg.schedule);
        Trace tr;
        tr.extra_columns = newsvendor_extra_columns();
        for (int t = 0; t < 1000; ++t) {
            const auto r = newsvendor_step(q, cfg, demand->next());
            const double a = r.extras[0];
            const double y = r.extras[1];
            CHECK(r.state_next - r.extras[3] == doctest::Approx(y * (1 - 0.6) + 0.6 * 0.9 * a));
            CHECK(r.state_next >= r.extras[3]);
            tr.rows.push_back(r);
        }
        const double fr = fill_rate(tr);
        CHECK((fr > 0.8 && fr <= 1.0));
    }

    TEST_CASE("fill rate") {
        Trace empty;
        empty.extra_columns = newsvendor_extra_columns();
        CHECK_THROWS_AS(fill_rate(empty), InvalidInput);
    }
}
