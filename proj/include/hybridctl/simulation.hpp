#pragma once

#include <cstddef>
#include <vector>

#include "hybridctl/integrator.hpp"
#include "hybridctl/model.hpp"
#include "hybridctl/trigger.hpp"

namespace hybridctl {

enum class Mode { open_loop, event_only, impulsive_only, hybrid };

const char* mode_name(Mode m);

struct ControllerMode {
    Mode mode = Mode::open_loop;
    /// Enforced lower bound h on inter-execution times; required positive for
    /// impulsive_only and hybrid.
    double dwell = 0.0;
    /// event_only guard: terminate once more than this many events land in
    /// any trailing unit-time window.
    std::size_t zeno_cap = 10000;

    void validate() const;
};

enum class EventKind { feedback_update, impulse_plus_update };

struct EventRecord {
    double time = 0.0;
    EventKind kind = EventKind::feedback_update;
    Vec state_before;
    Vec state_after;
    Vec held_input_after;
};

struct EventLog {
    std::vector<EventRecord> records;

    std::size_t size() const { return records.size(); }
    bool empty() const { return records.empty(); }
    std::size_t count(EventKind k) const;
    std::vector<double> times() const;
    /// Differences of consecutive record times.
    std::vector<double> gaps() const;
};

enum class Termination { horizon, zeno_guard, error };

struct SimResult {
    HistoryBuffer trajectory{1};
    EventLog events;
    ControllerMode mode;
    SolverConfig solver;
    Termination termination = Termination::horizon;
    /// hybrid: the final inter-event interval outlived the dwell with no
    /// trigger, so the held input persisted to the horizon.
    bool quiescent_tail = false;
    double t_begin = 0.0;
    double t_end = 0.0;
    /// Held input on [t_begin, first event).
    Vec initial_input;
};

/// Run one closed-loop simulation from t0 = 0 with initial segment phi.
///
/// open_loop:       u = 0, no impulses.
/// event_only:      u = k(x(t_i)) updated at each trigger crossing; the zeno
///                  guard converts event accumulation into a flagged result.
/// impulsive_only:  u = 0; state jumps exactly every dwell.
/// hybrid:          if the first crossing after t_i arrives later than
///                  t_i + dwell it becomes a feedback update; otherwise the
///                  input is held to t_i + dwell, an impulse fires there and
///                  the feedback is refreshed from the post-jump state. The
///                  measurement error resets at every record.
SimResult run_simulation(const SystemModel& model, const InitialFn& phi, const TriggerRule& rule,
                         const ControllerMode& mode, const SolverConfig& solver);

}  // namespace hybridctl
