#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <vector>

#include "hybridctl/simulation.hpp"

namespace hybridctl {

struct OracleEvent {
    double t = 0.0;
    double x = 0.0;
};

struct ZenoOracle {
    std::vector<OracleEvent> events;
    /// sigma0 = 0: the rule holds with equality at the sample instant itself
    /// and never defines a later crossing; no semantics is invented for it.
    bool degenerate = false;
    /// Gap summation stopped advancing in floating point.
    bool saturated = false;
};

/// Closed-form event recursion for the scalar model xdot = b x(t-r) + k x(t_i)
/// while the delayed term is frozen at the unit initial segment (t <= r):
/// each segment has constant slope b + k x(t_i), the event fires when
/// x(t_i) - x(t) = sqrt(sigma0) x(t), so
///   x(t_{i+1}) = x(t_i) / (1 + sqrt(sigma0)),
///   dt_i = (sqrt(sigma0)/(1+sqrt(sigma0))) x(t_i) / (|b| + |k| x(t_i)).
/// Entirely independent of the integrator.
ZenoOracle zeno_recursion_oracle(double x0, double b, double k, double sigma0, double t_max,
                                 std::size_t max_events = 100000);

struct OracleComparison {
    double max_time_dev = 0.0;
    double max_state_dev = 0.0;
    std::size_t compared = 0;
    std::size_t sim_count = 0;
    std::size_t oracle_count = 0;
    bool count_mismatch = false;
};

/// Deviations between a scalar event_only run and the recursion oracle over
/// the first N shared events. A count mismatch is reported, not fatal.
OracleComparison compare_to_oracle(const SimResult& sim, const ZenoOracle& oracle,
                                   std::size_t first_n = static_cast<std::size_t>(-1));

using LyapunovFn = std::function<double(const Vec&)>;

struct AuditViolation {
    double time = 0.0;
    double dv_estimate = 0.0;
    double bound = 0.0;
};

struct LyapunovAudit {
    std::vector<double> times;
    std::vector<double> w;  // e^{lambda (t - t0)} V(x(t)), one entry per sample
    double sup = 0.0;
    double sup_time = 0.0;
    /// Sup attained at the final sample: the chosen lambda outruns the decay.
    bool sup_at_end = false;
    std::vector<std::size_t> razumikhin_active;
    std::vector<AuditViolation> violations;
};

/// Series w(t) = e^{lambda (t - t0)} V(x(t)) over every stored sample.
LyapunovAudit lyapunov_trace(const HistoryBuffer& traj, const LyapunovFn& V, double lambda,
                             double t0);

/// At each sample where q V(x(t)) >= max of V over the stored window
/// [t - tau, t], estimate D+V by forward difference and flag excesses over
/// rate_coeff * V beyond a finite-difference tolerance of
/// 10 * window_dt * max(1, V).
LyapunovAudit razumikhin_audit(const HistoryBuffer& traj, const LyapunovFn& V, double q,
                               double tau, double rate_coeff, double window_dt);

struct DecayFit {
    double c0 = 0.0;      // envelope amplitude
    double lambda = 0.0;  // positive = exponential decay, negative = growth
    bool infinite_rate = false;
    std::size_t points = 0;
    bool used_envelope = true;  // false: too few peaks, fitted raw log-norm
};

/// Least-squares fit of ln of the peak envelope of ||x|| against time from
/// t_start on. Monotone signals (no interior peaks) fall back to a raw
/// log-norm fit; an all-zero tail raises the infinite-rate flag.
DecayFit decay_fit(const HistoryBuffer& traj, double t_start);

struct ZenoReport {
    enum class Verdict { zeno_suspected, dwell_bounded, inconclusive };

    std::size_t event_count = 0;
    double min_gap = 0.0;
    double mean_gap = 0.0;
    double max_gap = 0.0;
    /// x(t_{i+1}) / x(t_i) over consecutive events (scalar runs only).
    std::vector<double> contraction_ratios;
    /// Partial sum of gaps = time of the last event.
    double accumulation_estimate = 0.0;
    bool guard_terminated = false;
    /// Strict decrease of the last resolved gaps (gaps above 10 x tol_event;
    /// below that the bisection bracket is saturated and gaps collapse to 0).
    bool gap_tail_decreasing = false;
    Verdict verdict = Verdict::inconclusive;
};

/// Post-run Zeno diagnostics. zeno_suspected requires guard termination plus
/// a strictly decreasing resolved-gap tail; dwell_bounded requires the
/// minimum gap to clear dwell - tol.
ZenoReport zeno_report(const SimResult& sim, std::optional<double> dwell, double tol);

}  // namespace hybridctl
