#include "hybridctl/integrator.hpp"

#include <cmath>
#include <stdexcept>

namespace hybridctl {

namespace {

Vec eval_rhs(const SystemModel& model, const HistoryBuffer& buffer, double t, const Vec& x,
             const Vec& bu) {
    HistoryWindow w;
    w.t = t;
    w.x_now = &x;
    w.past = &buffer;
    Vec f = model.drift(t, w);
    if (f.size() != model.state_dim) throw std::logic_error("drift returned wrong dimension");
    axpy(f, 1.0, bu);
    return f;
}

}  // namespace

Vec rk4_step(const SystemModel& model, const HistoryBuffer& buffer, double t, const Vec& x,
             const Vec& u_held, double dt) {
    if (!(dt > 0.0)) throw std::invalid_argument("rk4_step: dt must be positive");
    const double tau = model.tau();
    if (!buffer.empty() && tau > 0.0) {
        const double slack = 1e-9 * std::max(1.0, std::abs(t));
        if (buffer.t_min() > t - tau + slack || buffer.t_max() < t - slack)
            throw std::logic_error("rk4_step: history does not cover [t - tau, t]");
    }
    const Vec bu = model.input_gain.apply(u_held);

    const Vec k1 = eval_rhs(model, buffer, t, x, bu);
    const Vec k2 = eval_rhs(model, buffer, t + 0.5 * dt, scaled_sum(x, 0.5 * dt, k1), bu);
    const Vec k3 = eval_rhs(model, buffer, t + 0.5 * dt, scaled_sum(x, 0.5 * dt, k2), bu);
    const Vec k4 = eval_rhs(model, buffer, t + dt, scaled_sum(x, dt, k3), bu);

    Vec out = x;
    const double w = dt / 6.0;
    for (std::size_t i = 0; i < out.size(); ++i)
        out[i] += w * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    return out;
}

Vec apply_impulse(const SystemModel& model, const Vec& x_minus) {
    Vec g = model.impulse_law(x_minus);
    if (g.size() != model.input_dim) throw std::logic_error("impulse law returned wrong dimension");
    Vec jump = model.input_gain.apply(g);
    Vec out = x_minus;
    axpy(out, 1.0, jump);
    return out;
}

void integrate_segment(const SystemModel& model, HistoryBuffer& buffer, double t_start,
                       double t_end, const Vec& u_held, double dt, const StepObserver& observer) {
    if (t_end < t_start) throw std::invalid_argument("integrate_segment: t_end < t_start");
    if (buffer.empty()) throw std::logic_error("integrate_segment: empty buffer");
    if (buffer.t_max() != t_start)
        throw std::logic_error("integrate_segment: t_start must be the buffer head");
    if (t_end == t_start) return;

    double t = t_start;
    Vec x = buffer.state_at(buffer.size() - 1);
    while (t < t_end) {
        const double remaining = t_end - t;
        const bool last = remaining <= dt * (1.0 + 1e-9);
        const double step = last ? remaining : dt;
        x = rk4_step(model, buffer, t, x, u_held, step);
        t = last ? t_end : t + dt;
        buffer.append(t, x);
        if (observer) observer(t, x);
    }
}

}  // namespace hybridctl
