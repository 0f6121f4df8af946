#pragma once

#include <functional>

#include "hybridctl/model.hpp"

namespace hybridctl {

/// One classical 4-stage Runge-Kutta step of  xdot = f(t, x_t) + B u_held
/// from (t, x) over dt. Delayed arguments are read from the committed buffer
/// (right limits); the requirement dt <= min positive delay keeps every
/// delayed lookup behind t.
Vec rk4_step(const SystemModel& model, const HistoryBuffer& buffer, double t, const Vec& x,
             const Vec& u_held, double dt);

/// Post-jump state x + B g(x). The caller records the discontinuity.
Vec apply_impulse(const SystemModel& model, const Vec& x_minus);

using StepObserver = std::function<void(double, const Vec&)>;

/// Advance the buffer from t_start (which must be the buffer head) to t_end
/// under a held input, with fixed steps of dt and a shortened final step that
/// lands on t_end exactly. The observer sees every accepted step.
void integrate_segment(const SystemModel& model, HistoryBuffer& buffer, double t_start,
                       double t_end, const Vec& u_held, double dt,
                       const StepObserver& observer = {});

}  // namespace hybridctl
