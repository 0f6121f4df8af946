#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "hybridctl/simulation.hpp"

using namespace hybridctl;
using Catch::Approx;

namespace {

struct RandomCase {
    double b, k, r, sigma0, h, beta, phi0, T;
};

// Validity ranges: contraction impulses, stabilizing-signed gains, delays
// comfortably above dt, dwell well below the horizon.
RandomCase draw(std::mt19937& rng) {
    auto uni = [&](double lo, double hi) {
        return std::uniform_real_distribution<double>(lo, hi)(rng);
    };
    RandomCase c;
    c.b = -uni(0.05, 0.4);
    c.k = -uni(0.05, 0.5);
    c.r = uni(2.0, 16.0);
    c.sigma0 = uni(0.04, 0.64);
    c.h = uni(0.3, 1.2);
    c.beta = -uni(0.1, 0.8);
    c.phi0 = uni(0.5, 2.0);
    c.T = uni(8.0, 14.0);
    return c;
}

SimResult run_case(const RandomCase& c, Mode mode, std::size_t cap = 400) {
    SystemModel model = scalar_delay_model(c.b, c.k, c.r, c.beta);
    SolverConfig solver;
    solver.dt = 1e-3;
    solver.tol_event = 1e-9;
    solver.horizon = c.T;
    ControllerMode cm;
    cm.mode = mode;
    cm.dwell = c.h;
    cm.zeno_cap = cap;
    return run_simulation(model, constant_initial({c.phi0}), TriggerRule::power_rule(c.sigma0),
                          cm, solver);
}

}  // namespace

TEST_CASE("property: error reset and feedback consistency at every record",
          "[property][hybrid]") {
    std::mt19937 rng(20240811);
    for (int trial = 0; trial < 12; ++trial) {
        const RandomCase c = draw(rng);
        const SimResult r = run_case(c, Mode::hybrid);
        INFO("trial " << trial << ": b=" << c.b << " k=" << c.k << " h=" << c.h);
        for (const auto& rec : r.events.records) {
            const Vec at = r.trajectory.evaluate(rec.time, Side::right);
            CHECK(at[0] == rec.state_after[0]);  // e(t_i^+) = 0 exactly
            CHECK(rec.held_input_after[0] == c.k * rec.state_after[0]);
        }
    }
}

TEST_CASE("property: jump exactness with zero tolerance", "[property][hybrid]") {
    std::mt19937 rng(917);
    for (int trial = 0; trial < 12; ++trial) {
        const RandomCase c = draw(rng);
        const SimResult r = run_case(c, Mode::hybrid);
        SystemModel model = scalar_delay_model(c.b, c.k, c.r, c.beta);
        for (const auto& rec : r.events.records) {
            if (rec.kind != EventKind::impulse_plus_update) continue;
            const Vec jump = model.input_gain.apply(model.impulse_law(rec.state_before));
            CHECK(rec.state_after[0] - rec.state_before[0] == jump[0]);
        }
    }
}

TEST_CASE("property: dwell lower bound excludes accumulation in hybrid mode",
          "[property][hybrid]") {
    std::mt19937 rng(4242);
    for (int trial = 0; trial < 12; ++trial) {
        const RandomCase c = draw(rng);
        const SimResult r = run_case(c, Mode::hybrid);
        for (double g : r.events.gaps()) {
            INFO("trial " << trial << " h=" << c.h);
            CHECK(g >= c.h - 1e-9);
        }
        CHECK(r.termination == Termination::horizon);
    }
}

TEST_CASE("property: hybrid slack is confined to dwell intervals that end in an impulse",
          "[property][hybrid]") {
    std::mt19937 rng(5150);
    const double tol_margin = 1e-12;
    for (int trial = 0; trial < 12; ++trial) {
        const RandomCase c = draw(rng);
        const SimResult r = run_case(c, Mode::hybrid);
        const TriggerRule rule = TriggerRule::power_rule(c.sigma0);
        const auto& traj = r.trajectory;
        const auto& rec = r.events.records;

        std::size_t ri = 0;
        Vec x_sample = constant_initial({c.phi0})(0.0);
        for (std::size_t i = 0; i < traj.size(); ++i) {
            const double t = traj.time_at(i);
            if (t < 0.0) continue;
            while (ri < rec.size() && rec[ri].time <= t) x_sample = rec[ri++].state_after;
            // only completed inter-record intervals are judged
            if (ri >= rec.size()) break;
            Vec e = x_sample;
            axpy(e, -1.0, traj.state_at(i));
            const double m = trigger_margin(traj.state_at(i), e, rule);
            if (m < -tol_margin) {
                // the enclosing interval must terminate with an impulse
                CHECK(rec[ri].kind == EventKind::impulse_plus_update);
                CHECK(t <= rec[ri].time);
            }
        }
    }
}

TEST_CASE("property: impulsive-only count equals floor((T - t0)/h)", "[property][impulsive]") {
    std::mt19937 rng(31337);
    for (int trial = 0; trial < 12; ++trial) {
        RandomCase c = draw(rng);
        // keep (T - t0)/h away from integer boundaries where float rounding
        // could legitimately flip the count
        const double ratio = c.T / c.h;
        if (std::abs(ratio - std::round(ratio)) < 1e-3) c.T += 0.01;
        const SimResult r = run_case(c, Mode::impulsive_only);
        const auto expected = static_cast<std::size_t>(std::floor(c.T / c.h));
        INFO("T=" << c.T << " h=" << c.h);
        CHECK(r.events.size() == expected);
    }
}

TEST_CASE("property: event-only margin soundness at accepted samples", "[property][event]") {
    std::mt19937 rng(777);
    for (int trial = 0; trial < 8; ++trial) {
        const RandomCase c = draw(rng);
        const SimResult r = run_case(c, Mode::event_only, 200);
        const TriggerRule rule = TriggerRule::power_rule(c.sigma0);
        const auto& traj = r.trajectory;
        std::size_t ri = 0;
        Vec x_sample = constant_initial({c.phi0})(0.0);
        for (std::size_t i = 0; i < traj.size(); ++i) {
            const double t = traj.time_at(i);
            if (t < 0.0) continue;
            while (ri < r.events.size() && r.events.records[ri].time <= t)
                x_sample = r.events.records[ri++].state_after;
            Vec e = x_sample;
            axpy(e, -1.0, traj.state_at(i));
            CHECK(trigger_margin(traj.state_at(i), e, rule) >= -1e-12);
        }
    }
}
