#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "hybridctl/trigger.hpp"

using namespace hybridctl;
using Catch::Approx;

TEST_CASE("quadratic rule margin matches sigma0 x^2 - e^2", "[trigger]") {
    const TriggerRule rule = TriggerRule::power_rule(0.36);
    CHECK(trigger_margin({1.0}, {0.0}, rule) == Approx(0.36).margin(1e-15));
    CHECK(trigger_margin({1.0}, {0.6}, rule) == Approx(0.0).margin(1e-15));
    CHECK(trigger_margin({0.0}, {0.0}, rule) == 0.0);
}

TEST_CASE("comparison functions are class K on a sampled grid", "[trigger]") {
    const TriggerRule rule = TriggerRule::power_rule(0.5, 2.0, 1.5);
    rule.validate();
    double prev_chi = rule.chi(0.0), prev_a = rule.alpha1(0.0);
    CHECK(prev_chi == 0.0);
    CHECK(prev_a == 0.0);
    for (int i = 1; i <= 50; ++i) {
        const double s = 0.1 * i;
        CHECK(rule.chi(s) > prev_chi);
        CHECK(rule.alpha1(s) > prev_a);
        prev_chi = rule.chi(s);
        prev_a = rule.alpha1(s);
    }
}

TEST_CASE("rule validation rejects degenerate parameters", "[trigger]") {
    TriggerRule rule = TriggerRule::power_rule(1.0);
    rule.sigma = 0.0;
    CHECK_THROWS_AS(rule.validate(), std::invalid_argument);
    CHECK_THROWS_AS(TriggerRule::power_rule(1.0, -1.0, 2.0), std::invalid_argument);
}

TEST_CASE("bisection finds a linear root to tolerance", "[trigger]") {
    const auto margin = [](double t) { return 1.0 - t; };
    const double t = locate_crossing(margin, 0.0, 2.0, 1e-9);
    CHECK(t == Approx(1.0).margin(1e-9));
}

TEST_CASE("bisection reproduces the first-segment crossing of the scalar example",
          "[trigger]") {
    // x(t) = 1 - 0.3 t, e(t) = 0.3 t, margin = 0.36 x^2 - e^2 ; root at t = 1.25
    const auto margin = [](double t) {
        const double x = 1.0 - 0.3 * t;
        const double e = 0.3 * t;
        return 0.36 * x * x - e * e;
    };
    const double t = locate_crossing(margin, 0.0, 2.0, 1e-9);
    CHECK(t == Approx(1.25).margin(1e-6));
}

TEST_CASE("degenerate bracket returns the left end", "[trigger]") {
    const auto margin = [](double t) { return -1.0 - t; };
    CHECK(locate_crossing(margin, 0.5, 2.0, 1e-9) == 0.5);
}

TEST_CASE("unbracketed sign change is rejected", "[trigger]") {
    const auto margin = [](double) { return 1.0; };
    CHECK_THROWS_AS(locate_crossing(margin, 0.0, 1.0, 1e-9), std::invalid_argument);
}

TEST_CASE("returned time never lies past the crossing", "[trigger]") {
    const auto margin = [](double t) { return 0.3 - t; };
    const double t = locate_crossing(margin, 0.0, 1.0, 1e-6);
    CHECK(margin(t) >= 0.0);
    CHECK(t <= 0.3);
    CHECK(t == Approx(0.3).margin(1e-6));
}
