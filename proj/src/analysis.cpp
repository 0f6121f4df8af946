#include "hybridctl/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace hybridctl {

ZenoOracle zeno_recursion_oracle(double x0, double b, double k, double sigma0, double t_max,
                                 std::size_t max_events) {
    if (!(x0 > 0.0)) throw std::invalid_argument("zeno_recursion_oracle: x0 must be positive");
    if (!(b < 0.0)) throw std::invalid_argument("zeno_recursion_oracle: b must be negative");
    if (!(k < 0.0)) throw std::invalid_argument("zeno_recursion_oracle: k must be negative");
    if (!(sigma0 >= 0.0)) throw std::invalid_argument("zeno_recursion_oracle: sigma0 must be nonnegative");

    ZenoOracle out;
    if (sigma0 == 0.0) {
        out.degenerate = true;
        return out;
    }
    const double s = std::sqrt(sigma0);
    const double shrink = 1.0 / (1.0 + s);
    const double frac = s * shrink;
    double t = 0.0, x = x0;
    while (out.events.size() < max_events) {
        const double gap = frac * x / (std::abs(b) + std::abs(k) * x);
        const double t_next = t + gap;
        if (t_next > t_max) break;
        if (t_next == t) out.saturated = true;
        x *= shrink;
        t = t_next;
        out.events.push_back({t, x});
    }
    return out;
}

OracleComparison compare_to_oracle(const SimResult& sim, const ZenoOracle& oracle,
                                   std::size_t first_n) {
    if (sim.trajectory.dim() != 1)
        throw std::invalid_argument("compare_to_oracle: scalar runs only");
    OracleComparison c;
    c.sim_count = sim.events.size();
    c.oracle_count = oracle.events.size();
    c.count_mismatch = c.sim_count != c.oracle_count;
    c.compared = std::min({c.sim_count, c.oracle_count, first_n});
    for (std::size_t i = 0; i < c.compared; ++i) {
        const auto& r = sim.events.records[i];
        c.max_time_dev = std::max(c.max_time_dev, std::abs(r.time - oracle.events[i].t));
        c.max_state_dev =
            std::max(c.max_state_dev, std::abs(r.state_after[0] - oracle.events[i].x));
    }
    return c;
}

LyapunovAudit lyapunov_trace(const HistoryBuffer& traj, const LyapunovFn& V, double lambda,
                             double t0) {
    if (!(lambda >= 0.0)) throw std::invalid_argument("lyapunov_trace: lambda must be nonnegative");
    if (traj.empty()) throw std::logic_error("lyapunov_trace: empty trajectory");
    LyapunovAudit a;
    a.times.reserve(traj.size());
    a.w.reserve(traj.size());
    std::size_t sup_idx = 0;
    for (std::size_t i = 0; i < traj.size(); ++i) {
        const double t = traj.time_at(i);
        const double wi = std::exp(lambda * (t - t0)) * V(traj.state_at(i));
        a.times.push_back(t);
        a.w.push_back(wi);
        if (wi > a.w[sup_idx]) sup_idx = i;
    }
    a.sup = a.w[sup_idx];
    a.sup_time = a.times[sup_idx];
    a.sup_at_end = sup_idx + 1 == traj.size();
    return a;
}

LyapunovAudit razumikhin_audit(const HistoryBuffer& traj, const LyapunovFn& V, double q,
                               double tau, double rate_coeff, double window_dt) {
    if (!(q > 1.0)) throw std::invalid_argument("razumikhin_audit: q must exceed 1");
    if (!(tau >= 0.0)) throw std::invalid_argument("razumikhin_audit: tau must be nonnegative");
    if (traj.empty()) throw std::logic_error("razumikhin_audit: empty trajectory");

    LyapunovAudit a;
    a.times.reserve(traj.size());
    std::vector<double> v(traj.size());
    for (std::size_t i = 0; i < traj.size(); ++i) {
        a.times.push_back(traj.time_at(i));
        v[i] = V(traj.state_at(i));
    }

    const double t_first = traj.t_min() + tau;
    std::size_t window_lo = 0;
    for (std::size_t i = 0; i + 1 < traj.size(); ++i) {
        const double t = traj.time_at(i);
        if (t < t_first) continue;
        while (traj.time_at(window_lo) < t - tau) ++window_lo;
        double window_max = 0.0;
        for (std::size_t j = window_lo; j <= i; ++j) {
            window_max = std::max(window_max, v[j]);
            if (traj.is_jump(j)) window_max = std::max(window_max, V(traj.left_state_at(j)));
        }
        if (q * v[i] < window_max) continue;
        a.razumikhin_active.push_back(i);

        // Forward difference of the flow; a jump at i+1 contributes its left
        // limit so the impulse does not pollute the derivative estimate.
        const double dt = traj.time_at(i + 1) - t;
        if (!(dt > 0.0)) continue;
        const double v_next = traj.is_jump(i + 1) ? V(traj.left_state_at(i + 1)) : v[i + 1];
        const double dv = (v_next - v[i]) / dt;
        const double tol = 10.0 * window_dt * std::max(1.0, v[i]);
        if (dv > rate_coeff * v[i] + tol) a.violations.push_back({t, dv, rate_coeff * v[i]});
    }
    return a;
}

namespace {

struct FitData {
    std::vector<double> t;
    std::vector<double> ln_v;
};

DecayFit least_squares(const FitData& d, double t_start) {
    DecayFit f;
    f.points = d.t.size();
    const auto n = static_cast<double>(d.t.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < d.t.size(); ++i) {
        const double x = d.t[i] - t_start;
        sx += x;
        sy += d.ln_v[i];
        sxx += x * x;
        sxy += x * d.ln_v[i];
    }
    const double denom = n * sxx - sx * sx;
    if (denom == 0.0) {
        f.lambda = 0.0;
        f.c0 = std::exp(sy / n);
        return f;
    }
    const double slope = (n * sxy - sx * sy) / denom;
    const double intercept = (sy - slope * sx) / n;
    f.lambda = -slope;
    f.c0 = std::exp(intercept);
    return f;
}

}  // namespace

DecayFit decay_fit(const HistoryBuffer& traj, double t_start) {
    if (traj.empty()) throw std::logic_error("decay_fit: empty trajectory");
    constexpr double kFloor = 1e-300;

    // Peak envelope: interior maxima of ||x|| (plateau ends included).
    FitData peaks;
    for (std::size_t i = 1; i + 1 < traj.size(); ++i) {
        if (traj.time_at(i) < t_start) continue;
        const double v = norm(traj.state_at(i));
        const double prev = norm(traj.state_at(i - 1));
        const double next = norm(traj.state_at(i + 1));
        if (v >= prev && v > next && v > kFloor) {
            peaks.t.push_back(traj.time_at(i));
            peaks.ln_v.push_back(std::log(v));
        }
    }
    if (peaks.t.size() >= 2) return least_squares(peaks, t_start);

    // Monotone trajectory: fit the raw log-norm instead.
    FitData raw;
    bool any_sample = false;
    for (std::size_t i = 0; i < traj.size(); ++i) {
        if (traj.time_at(i) < t_start) continue;
        any_sample = true;
        const double v = norm(traj.state_at(i));
        if (v > kFloor) {
            raw.t.push_back(traj.time_at(i));
            raw.ln_v.push_back(std::log(v));
        }
    }
    if (raw.t.size() < 2) {
        DecayFit f;
        f.infinite_rate = any_sample;  // tail identically zero
        f.lambda = std::numeric_limits<double>::infinity();
        f.used_envelope = false;
        return f;
    }
    DecayFit f = least_squares(raw, t_start);
    f.used_envelope = false;
    return f;
}

ZenoReport zeno_report(const SimResult& sim, std::optional<double> dwell, double tol) {
    ZenoReport rep;
    rep.event_count = sim.events.size();
    rep.guard_terminated = sim.termination == Termination::zeno_guard;

    const std::vector<double> gaps = sim.events.gaps();
    if (!gaps.empty()) {
        rep.min_gap = *std::min_element(gaps.begin(), gaps.end());
        rep.max_gap = *std::max_element(gaps.begin(), gaps.end());
        double s = 0.0;
        for (double g : gaps) s += g;
        rep.mean_gap = s / static_cast<double>(gaps.size());
    }
    if (!sim.events.empty()) rep.accumulation_estimate = sim.events.records.back().time;

    if (sim.trajectory.dim() == 1) {
        const auto& rec = sim.events.records;
        for (std::size_t i = 1; i < rec.size(); ++i) {
            const double prev = rec[i - 1].state_after[0];
            if (prev != 0.0) rep.contraction_ratios.push_back(rec[i].state_after[0] / prev);
        }
    }

    // Gaps below bracket resolution collapse to zero; judge the trend on the
    // resolved ones only.
    std::vector<double> resolved;
    for (double g : gaps)
        if (g > 10.0 * tol) resolved.push_back(g);
    if (resolved.size() >= 2) {
        rep.gap_tail_decreasing = true;
        const std::size_t k = std::min<std::size_t>(10, resolved.size());
        for (std::size_t i = resolved.size() - k + 1; i < resolved.size(); ++i)
            if (!(resolved[i] < resolved[i - 1])) {
                rep.gap_tail_decreasing = false;
                break;
            }
    }

    if (rep.guard_terminated && rep.gap_tail_decreasing)
        rep.verdict = ZenoReport::Verdict::zeno_suspected;
    else if (dwell && !gaps.empty() && rep.min_gap >= *dwell - tol)
        rep.verdict = ZenoReport::Verdict::dwell_bounded;
    return rep;
}

}  // namespace hybridctl
