#pragma once

#include <functional>
#include <limits>

#include "hybridctl/history.hpp"
#include "hybridctl/types.hpp"

namespace hybridctl {

/// View of the state segment x_t handed to the drift functional. The value at
/// zero delay is the in-flight stage state; positive delays read the committed
/// trajectory (right limits).
struct HistoryWindow {
    double t = 0.0;
    const Vec* x_now = nullptr;
    const HistoryBuffer* past = nullptr;

    const Vec& current() const { return *x_now; }

    Vec at_delay(double delay) const {
        if (delay < 0.0) throw std::invalid_argument("HistoryWindow::at_delay: negative delay");
        if (delay == 0.0) return *x_now;
        return past->evaluate(t - delay, Side::right);
    }
};

using DriftFn = std::function<Vec(double, const HistoryWindow&)>;
using FeedbackFn = std::function<Vec(const Vec&)>;
using ImpulseFn = std::function<Vec(const Vec&)>;
using InitialFn = std::function<Vec(double)>;

/// Delay structure, drift f(t, x_t), input gain B, feedback law k, impulse law g.
/// Concrete models use finitely many discrete delays; tau is the largest.
struct SystemModel {
    std::size_t state_dim = 1;
    std::size_t input_dim = 1;
    std::vector<double> delays;  // nonnegative; empty means delay-free
    DriftFn drift;
    Matrix input_gain;  // n x m
    FeedbackFn feedback_law;
    ImpulseFn impulse_law;

    double tau() const {
        double m = 0.0;
        for (double d : delays) m = std::max(m, d);
        return m;
    }

    double min_positive_delay() const {
        double m = std::numeric_limits<double>::infinity();
        for (double d : delays)
            if (d > 0.0) m = std::min(m, d);
        return m;
    }

    void validate() const;
};

/// Built-in scalar model  xdot = b x(t - r) + u  with k(x) = k_gain x and
/// g(x) = beta x (B = 1).
SystemModel scalar_delay_model(double b, double k_gain, double r, double beta);

/// Constant initial segment phi(s) = value.
InitialFn constant_initial(const Vec& value);

struct SolverConfig {
    double dt = 1e-3;
    double horizon = 100.0;
    Interp interpolation = Interp::linear;
    double tol_event = 1e-9;

    void validate(const SystemModel& model) const;
};

/// Populate a buffer with the initial segment phi on [t0 - tau, t0], sampled
/// on the dt grid with the final sample landing exactly on t0.
void seed_history(HistoryBuffer& buffer, const InitialFn& phi, double t0, double tau, double dt);

}  // namespace hybridctl
