#include "hybridctl/simulation.hpp"

#include <cmath>
#include <deque>
#include <limits>
#include <stdexcept>

namespace hybridctl {

const char* mode_name(Mode m) {
    switch (m) {
        case Mode::open_loop: return "open_loop";
        case Mode::event_only: return "event_only";
        case Mode::impulsive_only: return "impulsive_only";
        case Mode::hybrid: return "hybrid";
    }
    return "unknown";
}

void ControllerMode::validate() const {
    if ((mode == Mode::impulsive_only || mode == Mode::hybrid) && !(dwell > 0.0))
        throw std::invalid_argument("ControllerMode: dwell must be positive for this mode");
    if (mode == Mode::event_only && zeno_cap == 0)
        throw std::invalid_argument("ControllerMode: zeno_cap must be positive");
}

std::size_t EventLog::count(EventKind k) const {
    std::size_t n = 0;
    for (const auto& r : records)
        if (r.kind == k) ++n;
    return n;
}

std::vector<double> EventLog::times() const {
    std::vector<double> t;
    t.reserve(records.size());
    for (const auto& r : records) t.push_back(r.time);
    return t;
}

std::vector<double> EventLog::gaps() const {
    std::vector<double> g;
    if (records.size() < 2) return g;
    g.reserve(records.size() - 1);
    for (std::size_t i = 1; i < records.size(); ++i)
        g.push_back(records[i].time - records[i - 1].time);
    return g;
}

namespace {

class SimulationEngine {
public:
    SimulationEngine(const SystemModel& model, const InitialFn& phi, const TriggerRule& rule,
                     const ControllerMode& mode, const SolverConfig& solver)
        : model_(model), rule_(rule), mode_(mode), solver_(solver) {
        model_.validate();
        mode_.validate();
        solver_.validate(model_);
        if (uses_feedback() || mode_.mode == Mode::hybrid) rule_.validate();

        result_.trajectory = HistoryBuffer(model_.state_dim, solver_.interpolation);
        result_.mode = mode_;
        result_.solver = solver_;
        seed_history(result_.trajectory, phi, t0_, model_.tau(), solver_.dt);

        t_ = t0_;
        x_ = phi(0.0);
        if (x_.size() != model_.state_dim)
            throw std::invalid_argument("run_simulation: initial segment has wrong dimension");
        x_sample_ = x_;
        u_ = uses_feedback() ? model_.feedback_law(x_) : zeros(model_.input_dim);
        result_.initial_input = u_;
        result_.t_begin = t0_;
    }

    SimResult run() {
        switch (mode_.mode) {
            case Mode::open_loop: run_open_loop(); break;
            case Mode::impulsive_only: run_impulsive_only(); break;
            case Mode::event_only: run_triggered(); break;
            case Mode::hybrid: run_triggered(); break;
        }
        result_.t_end = t_;
        return std::move(result_);
    }

private:
    bool uses_feedback() const {
        return mode_.mode == Mode::event_only || mode_.mode == Mode::hybrid;
    }

    double horizon() const { return solver_.horizon; }

    // One RK4 step from the committed head (t_, x_) to te; does not commit.
    Vec propose(double te) const {
        return rk4_step(model_, result_.trajectory, t_, x_, u_, te - t_);
    }

    void commit(double te, Vec xe) {
        result_.trajectory.append(te, xe);
        t_ = te;
        x_ = std::move(xe);
    }

    double margin_of(const Vec& x) const {
        Vec e = x_sample_;
        axpy(e, -1.0, x);
        return trigger_margin(x, e, rule_);
    }

    // Shortened step target: full dt, capped by the horizon and an optional
    // deadline, never leaving a sliver below float resolution.
    double step_target(double cap) const {
        double te = t_ + solver_.dt;
        if (cap - te <= solver_.dt * 1e-9) te = cap;
        return std::min(te, cap);
    }

    void record_event(EventKind kind, Vec before, Vec after) {
        EventRecord r;
        r.time = t_;
        r.kind = kind;
        r.state_before = std::move(before);
        r.state_after = std::move(after);
        r.held_input_after = u_;
        result_.events.records.push_back(std::move(r));
    }

    // Returns true when the guard tripped.
    bool note_event_for_guard() {
        recent_events_.push_back(t_);
        while (!recent_events_.empty() && recent_events_.front() < t_ - 1.0)
            recent_events_.pop_front();
        return recent_events_.size() > mode_.zeno_cap;
    }

    void run_open_loop() {
        while (t_ < horizon()) {
            const double te = step_target(horizon());
            commit(te, propose(te));
        }
    }

    void run_impulsive_only() {
        const double h = mode_.dwell;
        std::size_t i = 1;
        while (true) {
            const double s_i = t0_ + static_cast<double>(i) * h;
            if (s_i > horizon()) break;
            while (t_ < s_i) {
                const double te = step_target(s_i);
                commit(te, propose(te));
            }
            fire_impulse();
            ++i;
        }
        while (t_ < horizon()) {
            const double te = step_target(horizon());
            commit(te, propose(te));
        }
    }

    void fire_impulse() {
        const Vec x_minus = x_;
        Vec x_plus = apply_impulse(model_, x_minus);
        result_.trajectory.mark_jump(x_plus);
        x_ = x_plus;
        x_sample_ = x_;
        if (uses_feedback()) u_ = model_.feedback_law(x_);
        record_event(EventKind::impulse_plus_update, x_minus, std::move(x_plus));
        t_last_event_ = t_;
    }

    void run_triggered() {
        const bool hybrid = mode_.mode == Mode::hybrid;
        const double h = mode_.dwell;
        double deadline = hybrid ? t0_ + h : std::numeric_limits<double>::infinity();
        bool waiting_impulse = false;

        while (t_ < horizon()) {
            double cap = horizon();
            if (hybrid && t_ < deadline) cap = std::min(cap, deadline);
            const double te = step_target(cap);
            Vec xe = propose(te);

            if (!waiting_impulse) {
                const double m0 = margin_of(x_);
                const double m1 = margin_of(xe);
                if (m0 > 0.0 && m1 <= 0.0) {
                    const double ts = locate_margin_zero(te, m0);
                    if (!hybrid || ts > deadline) {
                        // Natural event: commit up to the crossing and update
                        // the feedback from the freshly sampled state.
                        if (ts > t_) commit(ts, propose(ts));
                        x_sample_ = x_;
                        u_ = model_.feedback_law(x_);
                        record_event(EventKind::feedback_update, x_, x_);
                        t_last_event_ = t_;
                        if (hybrid) deadline = t_ + h;
                        if (mode_.mode == Mode::event_only && note_event_for_guard()) {
                            result_.termination = Termination::zeno_guard;
                            return;
                        }
                        continue;
                    }
                    if (t_ == deadline) {
                        // Crossing at t_i + h exactly: the impulse resolves it.
                        fire_impulse();
                        deadline = t_ + h;
                        continue;
                    }
                    // Crossing inside the dwell window: keep the held input
                    // and let the impulse at the deadline resolve it.
                    waiting_impulse = true;
                }
            }

            commit(te, std::move(xe));

            if (hybrid && t_ == deadline) {
                if (waiting_impulse) {
                    fire_impulse();
                    waiting_impulse = false;
                    deadline = t_ + h;
                }
                // No crossing before the deadline: the window stays open and
                // stepping continues uncapped until the trigger fires.
            }
        }

        if (hybrid && !waiting_impulse && (t_ - t_last_event_) > h)
            result_.quiescent_tail = true;
    }

    // Bisection refinement of the first margin crossing inside (t_, te].
    double locate_margin_zero(double te, double m_start) {
        auto margin_at = [&](double s) -> double {
            if (s == t_) return m_start;
            return margin_of(propose(s));
        };
        return locate_crossing(margin_at, t_, te, solver_.tol_event);
    }

    SystemModel model_;
    TriggerRule rule_;
    ControllerMode mode_;
    SolverConfig solver_;
    SimResult result_;

    const double t0_ = 0.0;
    double t_ = 0.0;
    Vec x_;
    Vec x_sample_;  // state at the last control update; e(t) = x_sample_ - x(t)
    Vec u_;
    double t_last_event_ = 0.0;
    std::deque<double> recent_events_;
};

}  // namespace

SimResult run_simulation(const SystemModel& model, const InitialFn& phi, const TriggerRule& rule,
                         const ControllerMode& mode, const SolverConfig& solver) {
    SimulationEngine engine(model, phi, rule, mode, solver);
    return engine.run();
}

}  // namespace hybridctl
