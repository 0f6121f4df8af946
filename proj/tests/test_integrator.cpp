#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "hybridctl/integrator.hpp"

using namespace hybridctl;
using Catch::Approx;

namespace {

// Delay-free scalar decay xdot = -x (+ u).
SystemModel decay_model() {
    SystemModel m;
    m.state_dim = 1;
    m.input_dim = 1;
    m.input_gain = Matrix::scalar(1.0);
    m.drift = [](double, const HistoryWindow& w) -> Vec { return {-w.current()[0]}; };
    m.feedback_law = [](const Vec&) -> Vec { return {0.0}; };
    m.impulse_law = [](const Vec&) -> Vec { return {0.0}; };
    return m;
}

double integrate_decay(double dt) {
    SystemModel m = decay_model();
    HistoryBuffer buf(1);
    buf.append(0.0, {1.0});
    integrate_segment(m, buf, 0.0, 1.0, {0.0}, dt);
    return buf.evaluate(1.0)[0];
}

}  // namespace

TEST_CASE("rk4 single step matches the classical value on xdot = -x", "[integrator]") {
    SystemModel m = decay_model();
    HistoryBuffer buf(1);
    buf.append(0.0, {1.0});
    const Vec x1 = rk4_step(m, buf, 0.0, {1.0}, {0.0}, 0.1);
    CHECK(x1[0] == Approx(0.9048375).margin(1e-7));
}

TEST_CASE("rk4 is exact for constant slopes from a frozen delayed term", "[integrator]") {
    // xdot = b x(t - r) + u with history identically 1: slope b + u.
    SystemModel m = scalar_delay_model(-0.1, -0.2, 16.0, 0.0);
    HistoryBuffer buf(1);
    seed_history(buf, constant_initial({1.0}), 0.0, 16.0, 0.1);
    const Vec x1 = rk4_step(m, buf, 0.0, {1.0}, {-0.2}, 0.1);
    CHECK(x1[0] == 0.97);  // slope exactly -0.3
}

TEST_CASE("zero state with zero input stays zero", "[integrator]") {
    SystemModel m = scalar_delay_model(-0.1, -0.2, 16.0, -0.293);
    HistoryBuffer buf(1);
    seed_history(buf, constant_initial({0.0}), 0.0, 16.0, 0.1);
    const Vec x1 = rk4_step(m, buf, 0.0, {0.0}, {0.0}, 0.1);
    CHECK(x1[0] == 0.0);
}

TEST_CASE("rk4 halving dt shrinks the error by the fourth-order factor", "[integrator]") {
    const double exact = std::exp(-1.0);
    for (double dt : {0.1, 0.05, 0.025}) {
        const double e1 = std::abs(integrate_decay(dt) - exact);
        const double e2 = std::abs(integrate_decay(dt / 2.0) - exact);
        const double ratio = e1 / e2;
        INFO("dt = " << dt << " ratio = " << ratio);
        CHECK(ratio >= 12.0);
        CHECK(ratio <= 20.0);
    }
}

TEST_CASE("apply_impulse realizes x + B g(x)", "[integrator]") {
    SystemModel m = scalar_delay_model(-0.1, -0.2, 16.0, -0.293);
    CHECK(apply_impulse(m, {1.0})[0] == Approx(0.707).margin(1e-15));
    CHECK(apply_impulse(m, {-2.0})[0] == Approx(-1.414).margin(1e-15));

    SystemModel id = scalar_delay_model(-0.1, -0.2, 16.0, 0.0);
    CHECK(apply_impulse(id, {1.25})[0] == 1.25);
}

TEST_CASE("jump exactness: the recorded difference is exactly B g(x)", "[integrator]") {
    SystemModel m = scalar_delay_model(-0.1, -0.2, 16.0, -0.293);
    for (double x : {1.0, -0.37, 12.5, 1e-9}) {
        const Vec before{x};
        const Vec after = apply_impulse(m, before);
        const Vec g = m.impulse_law(before);
        const Vec jump = m.input_gain.apply(g);
        CHECK(after[0] - before[0] == jump[0]);  // zero tolerance
    }
}

TEST_CASE("integrate_segment lands exactly and is exact for low-degree solutions",
          "[integrator]") {
    // constant slope -0.3 via frozen history and held input
    SystemModel m = scalar_delay_model(-0.1, -0.2, 16.0, 0.0);
    HistoryBuffer buf(1);
    seed_history(buf, constant_initial({1.0}), 0.0, 16.0, 0.1);
    integrate_segment(m, buf, 0.0, 1.0, {-0.2}, 0.1);
    CHECK(buf.t_max() == 1.0);
    CHECK(buf.evaluate(1.0)[0] == Approx(0.7).margin(1e-12));
}

TEST_CASE("integrate_segment reaches e^{-1} at dt = 0.01", "[integrator]") {
    CHECK(integrate_decay(0.01) == Approx(std::exp(-1.0)).margin(1e-9));
}

TEST_CASE("integrate_segment with an empty interval leaves the buffer unchanged",
          "[integrator]") {
    SystemModel m = decay_model();
    HistoryBuffer buf(1);
    buf.append(0.0, {1.0});
    integrate_segment(m, buf, 0.0, 0.0, {0.0}, 0.1);
    CHECK(buf.size() == 1);
    CHECK_THROWS_AS(integrate_segment(m, buf, 0.0, -1.0, {0.0}, 0.1), std::invalid_argument);
}

TEST_CASE("observer sees every accepted step and history matches it bit for bit",
          "[integrator]") {
    SystemModel m = decay_model();
    HistoryBuffer buf(1);
    buf.append(0.0, {1.0});
    std::vector<std::pair<double, double>> seen;
    integrate_segment(m, buf, 0.0, 0.55, {0.0}, 0.1,
                      [&](double t, const Vec& x) { seen.emplace_back(t, x[0]); });
    REQUIRE(seen.size() == 6);  // five full steps plus the shortened one
    CHECK(seen.back().first == 0.55);
    for (const auto& [t, x] : seen) {
        CHECK(buf.evaluate(t, Side::right)[0] == x);  // bit-for-bit
    }
}

TEST_CASE("rk4 coverage precondition is enforced", "[integrator]") {
    SystemModel m = scalar_delay_model(-0.1, -0.2, 16.0, 0.0);
    HistoryBuffer buf(1);
    buf.append(-1.0, {1.0});  // covers only [-1, 0], model needs 16 back
    buf.append(0.0, {1.0});
    CHECK_THROWS_AS(rk4_step(m, buf, 0.0, {1.0}, {0.0}, 0.1), std::logic_error);
}
