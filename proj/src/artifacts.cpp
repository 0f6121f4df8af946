#include "hybridctl/artifacts.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace hybridctl {

namespace fs = std::filesystem;
using nlohmann::json;

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

void atomic_write(const fs::path& path, const std::string& content) {
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    fs::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot open " + tmp.string() + " for writing");
        out << content;
        if (!out) throw std::runtime_error("write failed for " + tmp.string());
    }
    fs::rename(tmp, path);
}

namespace {

// Held input per trajectory sample: piecewise constant between records.
struct InputTracker {
    const SimResult& result;
    std::size_t next_record = 0;
    Vec current;

    explicit InputTracker(const SimResult& r) : result(r), current(r.initial_input) {}

    /// Input in effect immediately after time t.
    const Vec& advance_to(double t) {
        const auto& rec = result.events.records;
        while (next_record < rec.size() && rec[next_record].time <= t) {
            current = rec[next_record].held_input_after;
            ++next_record;
        }
        return current;
    }
};

int event_flag_at(const SimResult& result, double t, std::size_t& cursor) {
    const auto& rec = result.events.records;
    while (cursor < rec.size() && rec[cursor].time < t) ++cursor;
    int flag = 0;
    for (std::size_t j = cursor; j < rec.size() && rec[j].time == t; ++j)
        flag = std::max(flag, rec[j].kind == EventKind::impulse_plus_update ? 2 : 1);
    return flag;
}

void append_vec(std::string& row, const Vec& v) {
    for (double d : v) {
        row += ',';
        row += format_double(d);
    }
}

}  // namespace

std::string trajectory_csv(const SimResult& result) {
    const auto& traj = result.trajectory;
    std::string out = "t";
    for (std::size_t d = 0; d < traj.dim(); ++d) out += ",x" + std::to_string(d);
    for (std::size_t d = 0; d < result.initial_input.size(); ++d) out += ",u" + std::to_string(d);
    out += ",event_flag\n";

    InputTracker u_before(result);  // input that produced the sample
    std::size_t flag_cursor = 0;
    Vec u_prev = result.initial_input;
    for (std::size_t i = 0; i < traj.size(); ++i) {
        const double t = traj.time_at(i);
        const int flag = event_flag_at(result, t, flag_cursor);
        if (traj.is_jump(i)) {
            std::string row = format_double(t);
            append_vec(row, traj.left_state_at(i));
            append_vec(row, u_prev);
            row += ",2\n";
            out += row;
        }
        const Vec& u_now = u_before.advance_to(t);
        std::string row = format_double(t);
        append_vec(row, traj.state_at(i));
        append_vec(row, u_now);
        row += ',';
        row += std::to_string(flag);
        row += '\n';
        out += row;
        u_prev = u_now;
    }
    return out;
}

std::string events_csv(const SimResult& result) {
    const std::size_t n = result.trajectory.dim();
    const std::size_t m = result.initial_input.size();
    std::string out = "time,kind";
    for (std::size_t d = 0; d < n; ++d) out += ",x_before" + std::to_string(d);
    for (std::size_t d = 0; d < n; ++d) out += ",x_after" + std::to_string(d);
    for (std::size_t d = 0; d < m; ++d) out += ",u_after" + std::to_string(d);
    out += '\n';
    for (const auto& r : result.events.records) {
        std::string row = format_double(r.time);
        row += r.kind == EventKind::impulse_plus_update ? ",impulse" : ",feedback";
        append_vec(row, r.state_before);
        append_vec(row, r.state_after);
        append_vec(row, r.held_input_after);
        row += '\n';
        out += row;
    }
    return out;
}

namespace {

const char* termination_name(Termination t) {
    switch (t) {
        case Termination::horizon: return "horizon";
        case Termination::zeno_guard: return "zeno_guard";
        case Termination::error: return "error";
    }
    return "unknown";
}

json config_json(const RunConfig& cfg) {
    json j;
    j["model"] = cfg.model == ModelChoice::builtin ? "builtin" : "custom";
    j["b"] = cfg.b;
    j["k"] = cfg.k;
    j["r"] = cfg.r;
    j["phi"] = cfg.phi;
    j["beta"] = cfg.beta;
    j["mode"] = mode_name(cfg.mode);
    j["h"] = cfg.h;
    j["sigma0"] = cfg.sigma0;
    j["chi_exp"] = cfg.chi_exp;
    j["alpha1_exp"] = cfg.alpha1_exp;
    j["dt"] = cfg.dt;
    j["T"] = cfg.horizon;
    j["tol_event"] = cfg.tol_event;
    j["interp"] = cfg.interpolation == Interp::cubic ? "cubic" : "linear";
    j["zeno_cap"] = cfg.zeno_cap;
    j["q"] = cfg.q;
    j["random_free"] = RunConfig::random_free;
    return j;
}

}  // namespace

std::string summary_json(const RunConfig& cfg, const SimResult& result) {
    json j;
    j["config"] = config_json(cfg);
    j["termination"] = termination_name(result.termination);
    j["quiescent_tail"] = result.quiescent_tail;
    j["t_begin"] = result.t_begin;
    j["t_end"] = result.t_end;
    j["samples"] = result.trajectory.size();
    j["events"] = result.events.size();
    j["feedback_updates"] = result.events.count(EventKind::feedback_update);
    j["impulses"] = result.events.count(EventKind::impulse_plus_update);
    const auto& traj = result.trajectory;
    j["final_state"] = traj.state_at(traj.size() - 1);
    return j.dump(2) + "\n";
}

std::string certificate_json(const CertificateReport& rep) {
    json j;
    j["feedback_margin"] = rep.feedback_margin_value;
    j["feedback_ok"] = rep.feedback_ok;
    j["cbar"] = rep.cbar_value;
    j["condition_iii"] = {{"pass", rep.condition_iii.pass},
                          {"q", rep.condition_iii.q},
                          {"rho", rep.condition_iii.rho},
                          {"inv_rho", rep.condition_iii.inv_rho},
                          {"exp_cbar_h", rep.condition_iii.exp_cbar_h},
                          {"gap_q", rep.condition_iii.gap_q},
                          {"gap_exp", rep.condition_iii.gap_exp}};
    j["dwell_bound"] = {{"q_star", rep.dwell.q_star},
                        {"h_max", rep.dwell.h_max},
                        {"divergent", rep.dwell.divergent},
                        {"grid_fallback", rep.dwell.grid_fallback}};
    j["roots"] = {{"q1", rep.roots.q1}, {"q2", rep.roots.q2}};
    j["rho_interval"] = {{"lo", rep.rho_bounds.lo}, {"hi", rep.rho_bounds.hi}};
    j["selected"] = {{"b", rep.selected.b},     {"k", rep.selected.k},
                     {"sigma0", rep.selected.sigma0}, {"q", rep.selected.q},
                     {"h", rep.selected.h},     {"beta", rep.selected.beta},
                     {"rho", rep.selected.rho}, {"cbar", rep.selected.cbar},
                     {"c", rep.selected.c}};
    j["narrative"] = rep.narrative;
    return j.dump(2) + "\n";
}

std::string certificate_text(const CertificateReport& rep) {
    std::ostringstream os;
    os << "certificate report\n";
    os << "  dwell bound      q* = " << format_double(rep.dwell.q_star)
       << "  h_max = " << format_double(rep.dwell.h_max) << "\n";
    os << "  fixed points     q1 = " << format_double(rep.roots.q1)
       << "  q2 = " << format_double(rep.roots.q2) << "\n";
    os << "  rho interval     (" << format_double(rep.rho_bounds.lo) << ", "
       << format_double(rep.rho_bounds.hi) << ")\n";
    os << "  selected         h = " << format_double(rep.selected.h)
       << "  rho = " << format_double(rep.selected.rho)
       << "  beta = " << format_double(rep.selected.beta)
       << "  q = " << format_double(rep.selected.q) << "\n";
    os << "  condition (iii)  q > 1/rho > e^{cbar h}: " << format_double(rep.condition_iii.q)
       << " > " << format_double(rep.condition_iii.inv_rho) << " > "
       << format_double(rep.condition_iii.exp_cbar_h) << "  -> "
       << (rep.condition_iii.pass ? "pass" : "FAIL") << "\n";
    os << "  feedback margin  " << format_double(rep.feedback_margin_value) << "  -> "
       << (rep.feedback_ok ? "pass" : "FAIL") << "\n";
    os << "  " << rep.narrative << "\n";
    return os.str();
}

std::string zeno_json(const ZenoReport& rep, const OracleComparison& cmp,
                      const ZenoOracle& oracle) {
    json j;
    const char* verdict = rep.verdict == ZenoReport::Verdict::zeno_suspected ? "zeno_suspected"
                          : rep.verdict == ZenoReport::Verdict::dwell_bounded ? "dwell_bounded"
                                                                              : "inconclusive";
    j["verdict"] = verdict;
    j["event_count"] = rep.event_count;
    j["min_gap"] = rep.min_gap;
    j["mean_gap"] = rep.mean_gap;
    j["max_gap"] = rep.max_gap;
    j["accumulation_estimate"] = rep.accumulation_estimate;
    j["guard_terminated"] = rep.guard_terminated;
    j["gap_tail_decreasing"] = rep.gap_tail_decreasing;
    std::size_t nr = std::min<std::size_t>(rep.contraction_ratios.size(), 20);
    j["contraction_ratios_head"] =
        std::vector<double>(rep.contraction_ratios.begin(), rep.contraction_ratios.begin() + nr);
    j["oracle"] = {{"events", oracle.events.size()},
                   {"degenerate", oracle.degenerate},
                   {"saturated", oracle.saturated}};
    j["oracle_comparison"] = {{"compared", cmp.compared},
                              {"max_time_dev", cmp.max_time_dev},
                              {"max_state_dev", cmp.max_state_dev},
                              {"count_mismatch", cmp.count_mismatch}};
    return j.dump(2) + "\n";
}

std::string trajectory_svg(const SimResult& result) {
    const auto& traj = result.trajectory;
    const double t0 = traj.t_min(), t1 = traj.t_max();
    double lo = 0.0, hi = 0.0;
    for (std::size_t i = 0; i < traj.size(); ++i) {
        const double v = traj.state_at(i)[0];
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    if (hi == lo) hi = lo + 1.0;
    const double W = 900, H = 420, mx = 55, my = 25;
    const auto X = [&](double t) { return mx + (t - t0) / (t1 - t0) * (W - 2 * mx); };
    const auto Y = [&](double v) { return H - my - (v - lo) / (hi - lo) * (H - 2 * my); };

    std::ostringstream os;
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H
       << "\" viewBox=\"0 0 " << W << " " << H << "\">\n";
    os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    if (lo < 0.0 && hi > 0.0)
        os << "<line x1=\"" << X(t0) << "\" y1=\"" << Y(0) << "\" x2=\"" << X(t1) << "\" y2=\""
           << Y(0) << "\" stroke=\"#bbb\"/>\n";
    // event/impulse ticks
    for (const auto& r : result.events.records) {
        const bool imp = r.kind == EventKind::impulse_plus_update;
        os << "<line x1=\"" << X(r.time) << "\" y1=\"" << my << "\" x2=\"" << X(r.time)
           << "\" y2=\"" << H - my << "\" stroke=\"" << (imp ? "#d33" : "#3a3")
           << "\" stroke-width=\"0.6\" opacity=\"0.6\"/>\n";
    }
    // trajectory polyline, broken at jumps
    os << "<polyline fill=\"none\" stroke=\"#215\" stroke-width=\"1.4\" points=\"";
    for (std::size_t i = 0; i < traj.size(); ++i) {
        if (traj.is_jump(i)) {
            os << X(traj.time_at(i)) << "," << Y(traj.left_state_at(i)[0]) << " ";
        }
        os << X(traj.time_at(i)) << "," << Y(traj.state_at(i)[0]) << " ";
    }
    os << "\"/>\n";
    os << "<text x=\"" << mx << "\" y=\"15\" font-size=\"12\">x0(t), t in ["
       << format_double(t0) << ", " << format_double(t1) << "]</text>\n";
    os << "</svg>\n";
    return os.str();
}

RunArtifacts write_run_artifacts(const fs::path& out_dir, const RunConfig& cfg,
                                 const SimResult& result) {
    RunArtifacts a;
    a.trajectory = out_dir / "trajectory.csv";
    a.events = out_dir / "events.csv";
    a.summary = out_dir / "summary.json";
    atomic_write(a.trajectory, trajectory_csv(result));
    atomic_write(a.events, events_csv(result));
    atomic_write(a.summary, summary_json(cfg, result));
    if (cfg.svg) {
        a.svg = out_dir / "trajectory.svg";
        atomic_write(a.svg, trajectory_svg(result));
    }
    return a;
}

}  // namespace hybridctl
