#include "hybridctl/commands.hpp"

#include <future>
#include <ostream>
#include <sstream>

#include "hybridctl/analysis.hpp"
#include "hybridctl/artifacts.hpp"

#include "json.hpp"

namespace hybridctl {

namespace {

SimResult run_from_config(const RunConfig& cfg) {
    return run_simulation(cfg.make_model(), cfg.make_initial(), cfg.make_rule(),
                          cfg.make_controller(), cfg.make_solver());
}

int exit_for(const SimResult& r) {
    return r.termination == Termination::zeno_guard ? exit_zeno_guard : exit_ok;
}

}  // namespace

int cmd_simulate(const RunConfig& cfg, const CommandOptions& opt, std::ostream& out) {
    const SimResult result = run_from_config(cfg);
    const RunArtifacts art = write_run_artifacts(opt.out_dir, cfg, result);
    if (!opt.quiet) {
        out << "mode=" << mode_name(cfg.mode) << " samples=" << result.trajectory.size()
            << " events=" << result.events.size()
            << " termination=" << (result.termination == Termination::zeno_guard ? "zeno_guard" : "horizon")
            << "\n";
        out << "wrote " << art.trajectory.string() << ", " << art.events.string() << ", "
            << art.summary.string();
        if (!art.svg.empty()) out << ", " << art.svg.string();
        out << "\n";
    }
    return exit_for(result);
}

int cmd_verify(const RunConfig& cfg, const CommandOptions& opt, std::ostream& out) {
    SelectionOptions sel;
    sel.target_h = cfg.target_h ? *cfg.target_h : cfg.h;
    sel.beta = cfg.beta;
    sel.q = cfg.q;
    sel.sigma0 = cfg.sigma0;
    const CertificateReport rep = select_parameters(cfg.b, cfg.k, sel);
    atomic_write(opt.out_dir / "certificate.json", certificate_json(rep));
    atomic_write(opt.out_dir / "certificate.txt", certificate_text(rep));
    if (!opt.quiet) out << certificate_text(rep);
    return exit_ok;
}

int cmd_zeno(const RunConfig& cfg, const CommandOptions& opt, std::ostream& out) {
    RunConfig zcfg = cfg;
    zcfg.mode = Mode::event_only;
    const SimResult result = run_from_config(zcfg);
    const ZenoReport rep = zeno_report(result, std::nullopt, zcfg.tol_event);

    ZenoOracle oracle;
    OracleComparison cmp;
    if (zcfg.b < 0.0 && zcfg.k < 0.0 && zcfg.phi > 0.0) {
        oracle = zeno_recursion_oracle(zcfg.phi, zcfg.b, zcfg.k, zcfg.sigma0,
                                       std::min(zcfg.horizon, zcfg.r));
        cmp = compare_to_oracle(result, oracle);
    }
    atomic_write(opt.out_dir / "zeno.json", zeno_json(rep, cmp, oracle));
    write_run_artifacts(opt.out_dir, zcfg, result);
    if (!opt.quiet) {
        const char* verdict = rep.verdict == ZenoReport::Verdict::zeno_suspected ? "zeno_suspected"
                              : rep.verdict == ZenoReport::Verdict::dwell_bounded
                                  ? "dwell_bounded"
                                  : "inconclusive";
        out << "verdict=" << verdict << " events=" << rep.event_count
            << " accumulation=" << format_double(rep.accumulation_estimate)
            << " oracle_events=" << oracle.events.size() << "\n";
    }
    return exit_for(result);
}

int cmd_compare(const RunConfig& cfg, const CommandOptions& opt, std::ostream& out) {
    RunConfig hybrid_cfg = cfg;
    hybrid_cfg.mode = Mode::hybrid;
    RunConfig impulsive_cfg = cfg;
    impulsive_cfg.mode = Mode::impulsive_only;

    const SimResult hy = run_from_config(hybrid_cfg);
    const SimResult im = run_from_config(impulsive_cfg);
    const DecayFit hy_fit = decay_fit(hy.trajectory, 0.0);
    const DecayFit im_fit = decay_fit(im.trajectory, 0.0);

    nlohmann::json j;
    j["T"] = cfg.horizon;
    j["h"] = cfg.h;
    j["hybrid"] = {{"updates", hy.events.size()},
                   {"feedback_updates", hy.events.count(EventKind::feedback_update)},
                   {"impulses", hy.events.count(EventKind::impulse_plus_update)},
                   {"lambda_fit", hy_fit.lambda}};
    j["impulsive_only"] = {{"updates", im.events.size()},
                           {"impulses", im.events.count(EventKind::impulse_plus_update)},
                           {"lambda_fit", im_fit.lambda}};
    j["hybrid_fewer_updates"] = hy.events.size() < im.events.size();
    atomic_write(opt.out_dir / "compare.json", j.dump(2) + "\n");

    if (!opt.quiet) {
        std::ostringstream os;
        os << "mode            updates  impulses  lambda_fit\n";
        os << "hybrid          " << hy.events.size() << "\t " << hy.events.count(EventKind::impulse_plus_update)
           << "\t   " << format_double(hy_fit.lambda) << "\n";
        os << "impulsive_only  " << im.events.size() << "\t " << im.events.count(EventKind::impulse_plus_update)
           << "\t   " << format_double(im_fit.lambda) << "\n";
        out << os.str();
    }
    return exit_ok;
}

int cmd_sweep(const RunConfig&, const std::string& key, const std::vector<std::string>& values,
              const std::vector<std::pair<std::string, std::string>>& overrides,
              const std::string& config_text, const CommandOptions& opt, std::ostream& out) {
    if (values.empty()) throw ConfigError(ConfigError::Kind::parse, 0, key, "sweep needs values");

    struct SweepRun {
        std::string value;
        RunConfig cfg;
        std::filesystem::path dir;
    };
    std::vector<SweepRun> runs;
    for (const auto& v : values) {
        auto ov = overrides;
        ov.emplace_back(key, v);
        SweepRun r;
        r.value = v;
        r.cfg = parse_config(config_text, ov);  // each value re-validated
        r.dir = opt.out_dir / (key + "=" + v);
        runs.push_back(std::move(r));
    }

    // Independent runs with no shared mutable state; dispatch concurrently.
    std::vector<std::future<int>> futures;
    futures.reserve(runs.size());
    for (const auto& r : runs) {
        futures.push_back(std::async(std::launch::async, [&r]() {
            const SimResult result = run_from_config(r.cfg);
            write_run_artifacts(r.dir, r.cfg, result);
            return exit_for(result);
        }));
    }
    int worst = exit_ok;
    for (std::size_t i = 0; i < runs.size(); ++i) {
        const int code = futures[i].get();
        worst = std::max(worst, code);
        if (!opt.quiet)
            out << key << "=" << runs[i].value << " -> " << runs[i].dir.string()
                << (code == exit_zeno_guard ? " (zeno_guard)" : "") << "\n";
    }
    return worst;
}

}  // namespace hybridctl
