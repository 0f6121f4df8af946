#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "hybridctl/simulation.hpp"

using namespace hybridctl;
using Catch::Approx;

namespace {

struct PaperSetup {
    SystemModel model = scalar_delay_model(-0.1, -0.2, 16.0, -0.293);
    InitialFn phi = constant_initial({1.0});
    TriggerRule rule = TriggerRule::power_rule(0.36);
    SolverConfig solver;

    PaperSetup() {
        solver.dt = 1e-3;
        solver.tol_event = 1e-9;
        solver.horizon = 10.0;
    }
};

ControllerMode controller(Mode m, double h = 0.0, std::size_t cap = 10000) {
    ControllerMode c;
    c.mode = m;
    c.dwell = h;
    c.zeno_cap = cap;
    return c;
}

}  // namespace

TEST_CASE("event_only reproduces the first crossing of the scalar example", "[simulation]") {
    PaperSetup s;
    s.solver.horizon = 3.0;
    const SimResult r =
        run_simulation(s.model, s.phi, s.rule, controller(Mode::event_only), s.solver);
    REQUIRE(r.events.size() >= 2);
    const auto& first = r.events.records.front();
    CHECK(first.kind == EventKind::feedback_update);
    CHECK(first.time == Approx(1.25).margin(1e-6));
    CHECK(first.state_after[0] == Approx(0.625).margin(1e-6));
    CHECK(first.held_input_after[0] == Approx(-0.125).margin(1e-6));
}

TEST_CASE("event_only zeno guard flags the accumulation", "[simulation][zeno]") {
    PaperSetup s;
    const SimResult r =
        run_simulation(s.model, s.phi, s.rule, controller(Mode::event_only, 0.0, 500), s.solver);
    CHECK(r.termination == Termination::zeno_guard);
    CHECK(r.events.size() >= 500);
    CHECK(r.t_end < 10.0);

    // contraction by 1/(1 + sqrt(sigma0)) = 0.625 on the early cascade
    for (std::size_t i = 1; i <= 20; ++i) {
        const double ratio = r.events.records[i].state_after[0] /
                             r.events.records[i - 1].state_after[0];
        CHECK(ratio == Approx(0.625).margin(1e-3));
    }
    // event times never decrease, even at float saturation
    for (std::size_t i = 1; i < r.events.size(); ++i)
        CHECK(r.events.records[i].time >= r.events.records[i - 1].time);
}

TEST_CASE("event_only margin soundness between events", "[simulation]") {
    PaperSetup s;
    s.solver.horizon = 5.0;
    const SimResult r =
        run_simulation(s.model, s.phi, s.rule, controller(Mode::event_only, 0.0, 50), s.solver);
    // Recompute e(t) = x(t_i) - x(t) from the log and check the rule holds at
    // every accepted sample.
    const auto& traj = r.trajectory;
    std::size_t rec = 0;
    Vec x_sample = s.phi(0.0);
    for (std::size_t i = 0; i < traj.size(); ++i) {
        const double t = traj.time_at(i);
        if (t < 0.0) continue;
        while (rec < r.events.size() && r.events.records[rec].time <= t)
            x_sample = r.events.records[rec++].state_after;
        Vec e = x_sample;
        axpy(e, -1.0, traj.state_at(i));
        CHECK(trigger_margin(traj.state_at(i), e, s.rule) >= -1e-12);
    }
}

TEST_CASE("open loop from a zero segment stays identically zero", "[simulation]") {
    PaperSetup s;
    s.solver.horizon = 5.0;
    const SimResult r = run_simulation(s.model, constant_initial({0.0}), s.rule,
                                       controller(Mode::open_loop), s.solver);
    CHECK(r.events.empty());
    for (std::size_t i = 0; i < r.trajectory.size(); ++i)
        CHECK(r.trajectory.state_at(i)[0] == 0.0);
}

TEST_CASE("zero preservation holds with all controls active", "[simulation]") {
    PaperSetup s;
    s.solver.horizon = 3.0;
    const SimResult r = run_simulation(s.model, constant_initial({0.0}), s.rule,
                                       controller(Mode::hybrid, 0.666), s.solver);
    for (std::size_t i = 0; i < r.trajectory.size(); ++i)
        CHECK(r.trajectory.state_at(i)[0] == 0.0);
}

TEST_CASE("hybrid enforces the dwell lower bound on every inter-record gap",
          "[simulation][hybrid]") {
    PaperSetup s;
    s.solver.horizon = 30.0;
    const SimResult r =
        run_simulation(s.model, s.phi, s.rule, controller(Mode::hybrid, 0.666), s.solver);
    REQUIRE(r.events.size() >= 10);
    for (double g : r.events.gaps()) CHECK(g >= 0.666 - 1e-9);
    // both kinds appear on this run
    CHECK(r.events.count(EventKind::feedback_update) > 0);
    CHECK(r.events.count(EventKind::impulse_plus_update) > 0);
}

TEST_CASE("hybrid impulse records happen exactly one dwell after their predecessor",
          "[simulation][hybrid]") {
    PaperSetup s;
    s.solver.horizon = 30.0;
    const double h = 0.666;
    const SimResult r =
        run_simulation(s.model, s.phi, s.rule, controller(Mode::hybrid, h), s.solver);
    double prev = 0.0;
    for (const auto& rec : r.events.records) {
        if (rec.kind == EventKind::impulse_plus_update)
            CHECK(rec.time - prev == Approx(h).margin(1e-9));
        prev = rec.time;
    }
}

TEST_CASE("hybrid error reset: the post-record measurement error is exactly zero",
          "[simulation][hybrid]") {
    PaperSetup s;
    s.solver.horizon = 20.0;
    const SimResult r =
        run_simulation(s.model, s.phi, s.rule, controller(Mode::hybrid, 0.666), s.solver);
    for (const auto& rec : r.events.records) {
        // e(t_i^+) = x_sample - x(t_i^+) with x_sample = state_after
        const Vec at = r.trajectory.evaluate(rec.time, Side::right);
        CHECK(at[0] == rec.state_after[0]);
        // and the held input equals the feedback of the sampled state
        CHECK(rec.held_input_after[0] == s.model.feedback_law(rec.state_after)[0]);
    }
}

TEST_CASE("impulsive_only applies floor((T - t0)/h) impulses", "[simulation][impulsive]") {
    PaperSetup s;
    s.solver.horizon = 40.0;
    const double h = 0.666;
    const SimResult r =
        run_simulation(s.model, s.phi, s.rule, controller(Mode::impulsive_only, h), s.solver);
    const auto expected = static_cast<std::size_t>(std::floor(40.0 / h));
    CHECK(r.events.size() == expected);
    CHECK(r.events.size() == r.events.count(EventKind::impulse_plus_update));
    // impulses land on the h-grid with zero feedback input
    for (std::size_t i = 0; i < r.events.size(); ++i) {
        const auto& rec = r.events.records[i];
        CHECK(rec.time == Approx((i + 1) * h).margin(1e-9));
        CHECK(rec.held_input_after[0] == 0.0);
        CHECK(rec.state_after[0] == Approx(rec.state_before[0] * (1.0 - 0.293)).margin(1e-15));
    }
}

TEST_CASE("mode degeneracy: hybrid without crossings equals the quiet event_only run",
          "[simulation][hybrid]") {
    PaperSetup s;
    s.solver.horizon = 5.0;
    // enormous sigma: the margin never reaches zero before the horizon
    const TriggerRule quiet = TriggerRule::power_rule(1e12);
    const SimResult ev =
        run_simulation(s.model, s.phi, quiet, controller(Mode::event_only), s.solver);
    const SimResult hy =
        run_simulation(s.model, s.phi, quiet, controller(Mode::hybrid, 2.0 * s.solver.horizon),
                       s.solver);
    CHECK(ev.events.empty());
    CHECK(hy.events.empty());
    REQUIRE(ev.trajectory.size() == hy.trajectory.size());
    for (std::size_t i = 0; i < ev.trajectory.size(); ++i) {
        CHECK(ev.trajectory.time_at(i) == hy.trajectory.time_at(i));
        CHECK(std::abs(ev.trajectory.state_at(i)[0] - hy.trajectory.state_at(i)[0]) <= 1e-12);
    }
}

TEST_CASE("hybrid flags a quiescent tail when the trigger never fires again",
          "[simulation][hybrid]") {
    PaperSetup s;
    s.solver.horizon = 5.0;
    const TriggerRule quiet = TriggerRule::power_rule(1e12);
    const SimResult hy =
        run_simulation(s.model, s.phi, quiet, controller(Mode::hybrid, 0.5), s.solver);
    CHECK(hy.events.empty());
    CHECK(hy.quiescent_tail);
    CHECK(hy.termination == Termination::horizon);
}

TEST_CASE("simulation rejects invalid setups", "[simulation]") {
    PaperSetup s;
    CHECK_THROWS_AS(
        run_simulation(s.model, s.phi, s.rule, controller(Mode::hybrid, 0.0), s.solver),
        std::invalid_argument);
    SolverConfig bad = s.solver;
    bad.dt = 20.0;  // exceeds the delay
    CHECK_THROWS_AS(run_simulation(s.model, s.phi, s.rule, controller(Mode::open_loop), bad),
                    std::invalid_argument);
}

TEST_CASE("trajectory covers [t0 - tau, t_end]", "[simulation]") {
    PaperSetup s;
    s.solver.horizon = 2.0;
    const SimResult r =
        run_simulation(s.model, s.phi, s.rule, controller(Mode::open_loop), s.solver);
    CHECK(r.trajectory.t_min() == Approx(-16.0));
    CHECK(r.trajectory.t_max() == 2.0);
    CHECK(r.t_end == 2.0);
}
