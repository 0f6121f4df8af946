#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "hybridctl/commands.hpp"

namespace {

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot read config file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::vector<std::pair<std::string, std::string>> split_overrides(
    const std::vector<std::string>& sets) {
    std::vector<std::pair<std::string, std::string>> out;
    for (const auto& s : sets) {
        const auto eq = s.find('=');
        if (eq == std::string::npos)
            throw hybridctl::ConfigError(hybridctl::ConfigError::Kind::parse, 0, s,
                                         "--set expects key=value, got '" + s + "'");
        out.emplace_back(s.substr(0, eq), s.substr(eq + 1));
    }
    return out;
}

}  // namespace

int main(int argc, char** argv) {
    using namespace hybridctl;

    CLI::App app{"simulator and certificate engine for time-delay systems under "
                 "event-triggered and impulsive control"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir = "out";
    std::vector<std::string> sets;
    bool quiet = false;
    app.add_option("--config", config_path, "flat key = value config file");
    app.add_option("--out", out_dir, "output directory");
    app.add_option("--set", sets, "override a config key (key=value, repeatable)");
    app.add_flag("--quiet", quiet, "suppress normal output");

    auto* c_sim = app.add_subcommand("simulate", "run one mode end to end");
    auto* c_ver = app.add_subcommand("verify", "evaluate the stability certificates");
    auto* c_zen = app.add_subcommand("zeno", "event-only run with guard plus recursion oracle");
    auto* c_cmp = app.add_subcommand("compare", "hybrid vs impulsive-only on identical constants");
    auto* c_swp = app.add_subcommand("sweep", "simulate once per value of a swept key");

    std::string sweep_spec;
    c_swp->add_option("--sweep", sweep_spec, "key=v1,v2,... to sweep")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        const std::string text = config_path.empty() ? std::string{} : read_file(config_path);
        const auto overrides = split_overrides(sets);
        RunConfig cfg = parse_config(text, overrides);

        CommandOptions opt;
        opt.out_dir = out_dir;
        opt.quiet = quiet;

        if (c_sim->parsed()) return cmd_simulate(cfg, opt, std::cout);
        if (c_ver->parsed()) return cmd_verify(cfg, opt, std::cout);
        if (c_zen->parsed()) return cmd_zeno(cfg, opt, std::cout);
        if (c_cmp->parsed()) return cmd_compare(cfg, opt, std::cout);
        if (c_swp->parsed()) {
            const auto eq = sweep_spec.find('=');
            if (eq == std::string::npos)
                throw ConfigError(ConfigError::Kind::parse, 0, sweep_spec,
                                  "--sweep expects key=v1,v2,...");
            const std::string key = sweep_spec.substr(0, eq);
            std::vector<std::string> values;
            std::istringstream vs(sweep_spec.substr(eq + 1));
            std::string item;
            while (std::getline(vs, item, ',')) values.push_back(item);
            return cmd_sweep(cfg, key, values, overrides, text, opt, std::cout);
        }
        return exit_ok;
    } catch (const ConfigError& e) {
        std::cerr << "error kind=config line=" << e.line << " key=" << e.key << " msg=\""
                  << e.what() << "\"\n";
        return exit_config_error;
    } catch (const InfeasibleDwell& e) {
        std::cerr << "error kind=runtime h_max=" << e.h_max << " msg=\"" << e.what() << "\"\n";
        return exit_runtime_error;
    } catch (const std::exception& e) {
        std::cerr << "error kind=runtime msg=\"" << e.what() << "\"\n";
        return exit_runtime_error;
    }
}
