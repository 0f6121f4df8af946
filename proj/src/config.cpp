#include "hybridctl/config.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <set>
#include <sstream>

namespace hybridctl {

namespace {

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

struct Entry {
    std::string value;
    int line;
};

double parse_double(const std::string& key, const std::string& value, int line) {
    const std::string v = trim(value);
    char* end = nullptr;
    const double d = std::strtod(v.c_str(), &end);
    if (v.empty() || end != v.c_str() + v.size() || !std::isfinite(d))
        throw ConfigError(ConfigError::Kind::parse, line, key,
                          "value for '" + key + "' is not a finite number: '" + v + "'");
    return d;
}

std::size_t parse_count(const std::string& key, const std::string& value, int line) {
    const double d = parse_double(key, value, line);
    if (d < 0.0 || d != std::floor(d))
        throw ConfigError(ConfigError::Kind::parse, line, key,
                          "value for '" + key + "' must be a nonnegative integer");
    return static_cast<std::size_t>(d);
}

bool parse_bool(const std::string& key, const std::string& value, int line) {
    const std::string v = trim(value);
    if (v == "true" || v == "1" || v == "yes") return true;
    if (v == "false" || v == "0" || v == "no") return false;
    throw ConfigError(ConfigError::Kind::parse, line, key,
                      "value for '" + key + "' must be a boolean");
}

const std::set<std::string> kKnownKeys = {
    "model", "b", "k", "r", "phi", "beta", "mode", "h", "zeno_cap", "sigma0", "chi_exp",
    "alpha1_exp", "dt", "T", "tol_event", "interp", "q", "target_h", "out", "svg"};

void validation_error(const std::string& key, const std::string& msg, int line = 0) {
    throw ConfigError(ConfigError::Kind::validation, line, key, msg);
}

}  // namespace

RunConfig parse_config(const std::string& text,
                       const std::vector<std::pair<std::string, std::string>>& overrides) {
    std::map<std::string, Entry> kv;
    std::istringstream in(text);
    std::string raw;
    int line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        std::string line = raw;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError(ConfigError::Kind::parse, line_no, "",
                              "expected 'key = value' on line " + std::to_string(line_no));
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty() || value.empty())
            throw ConfigError(ConfigError::Kind::parse, line_no, key,
                              "empty key or value on line " + std::to_string(line_no));
        if (!kKnownKeys.count(key))
            throw ConfigError(ConfigError::Kind::parse, line_no, key, "unknown key '" + key + "'");
        if (kv.count(key))
            throw ConfigError(ConfigError::Kind::parse, line_no, key,
                              "duplicate key '" + key + "'");
        kv[key] = {value, line_no};
    }
    for (const auto& [key, value] : overrides) {
        if (!kKnownKeys.count(key))
            throw ConfigError(ConfigError::Kind::parse, 0, key, "unknown key '" + key + "'");
        kv[key] = {value, 0};
    }

    RunConfig cfg;
    for (const auto& [key, entry] : kv) {
        const std::string& v = entry.value;
        const int ln = entry.line;
        if (key == "model") {
            const std::string m = trim(v);
            if (m == "builtin")
                cfg.model = ModelChoice::builtin;
            else if (m == "custom")
                cfg.model = ModelChoice::custom;
            else
                throw ConfigError(ConfigError::Kind::parse, ln, key,
                                  "model must be 'builtin' or 'custom'");
        } else if (key == "mode") {
            const std::string m = trim(v);
            if (m == "open_loop")
                cfg.mode = Mode::open_loop;
            else if (m == "event_only")
                cfg.mode = Mode::event_only;
            else if (m == "impulsive_only")
                cfg.mode = Mode::impulsive_only;
            else if (m == "hybrid")
                cfg.mode = Mode::hybrid;
            else
                throw ConfigError(ConfigError::Kind::parse, ln, key, "unknown mode '" + m + "'");
        } else if (key == "interp") {
            const std::string m = trim(v);
            if (m == "linear")
                cfg.interpolation = Interp::linear;
            else if (m == "cubic")
                cfg.interpolation = Interp::cubic;
            else
                throw ConfigError(ConfigError::Kind::parse, ln, key,
                                  "interp must be 'linear' or 'cubic'");
        } else if (key == "out") {
            cfg.out_dir = trim(v);
        } else if (key == "svg") {
            cfg.svg = parse_bool(key, v, ln);
        } else if (key == "zeno_cap") {
            cfg.zeno_cap = parse_count(key, v, ln);
        } else if (key == "b") {
            cfg.b = parse_double(key, v, ln);
        } else if (key == "k") {
            cfg.k = parse_double(key, v, ln);
        } else if (key == "r") {
            cfg.r = parse_double(key, v, ln);
        } else if (key == "phi") {
            cfg.phi = parse_double(key, v, ln);
        } else if (key == "beta") {
            cfg.beta = parse_double(key, v, ln);
        } else if (key == "h") {
            cfg.h = parse_double(key, v, ln);
        } else if (key == "sigma0") {
            cfg.sigma0 = parse_double(key, v, ln);
        } else if (key == "chi_exp") {
            cfg.chi_exp = parse_double(key, v, ln);
        } else if (key == "alpha1_exp") {
            cfg.alpha1_exp = parse_double(key, v, ln);
        } else if (key == "dt") {
            cfg.dt = parse_double(key, v, ln);
        } else if (key == "T") {
            cfg.horizon = parse_double(key, v, ln);
        } else if (key == "tol_event") {
            cfg.tol_event = parse_double(key, v, ln);
        } else if (key == "q") {
            cfg.q = parse_double(key, v, ln);
        } else if (key == "target_h") {
            cfg.target_h = parse_double(key, v, ln);
        }
    }

    // Validation: names the offending key.
    if (!(cfg.dt > 0.0)) validation_error("dt", "dt must be positive");
    if (!(cfg.horizon > 0.0)) validation_error("T", "T must be positive");
    if (!(cfg.tol_event > 0.0)) validation_error("tol_event", "tol_event must be positive");
    if (!(cfg.r >= 0.0)) validation_error("r", "r must be nonnegative");
    if (cfg.r > 0.0 && cfg.dt > cfg.r)
        validation_error("dt", "dt must not exceed the delay r");
    if (!(cfg.sigma0 >= 0.0)) validation_error("sigma0", "sigma0 must be nonnegative");
    if (!(cfg.chi_exp > 0.0)) validation_error("chi_exp", "chi_exp must be positive");
    if (!(cfg.alpha1_exp > 0.0)) validation_error("alpha1_exp", "alpha1_exp must be positive");
    if ((cfg.mode == Mode::hybrid || cfg.mode == Mode::impulsive_only) && !(cfg.h > 0.0))
        validation_error("h", "h must be positive for this mode");
    if (cfg.mode == Mode::event_only && cfg.zeno_cap == 0)
        validation_error("zeno_cap", "zeno_cap must be positive");
    if (!(cfg.q > 1.0)) validation_error("q", "q must exceed 1");
    if (cfg.target_h && !(*cfg.target_h > 0.0))
        validation_error("target_h", "target_h must be positive");
    for (double val : {cfg.b, cfg.k, cfg.phi, cfg.beta, cfg.h})
        if (!std::isfinite(val)) validation_error("model", "constants must be finite");
    return cfg;
}

SystemModel RunConfig::make_model() const { return scalar_delay_model(b, k, r, beta); }

InitialFn RunConfig::make_initial() const { return constant_initial({phi}); }

TriggerRule RunConfig::make_rule() const {
    // sigma0 = 0 builds a degenerate rule; modes that use the trigger reject
    // it at validation time.
    return TriggerRule::power_rule(sigma0, chi_exp, alpha1_exp);
}

ControllerMode RunConfig::make_controller() const {
    ControllerMode c;
    c.mode = mode;
    c.dwell = h;
    c.zeno_cap = zeno_cap;
    return c;
}

SolverConfig RunConfig::make_solver() const {
    SolverConfig s;
    s.dt = dt;
    s.horizon = horizon;
    s.tol_event = tol_event;
    s.interpolation = interpolation;
    return s;
}

}  // namespace hybridctl
