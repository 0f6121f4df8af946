#pragma once

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "hybridctl/certificates.hpp"
#include "hybridctl/model.hpp"
#include "hybridctl/simulation.hpp"
#include "hybridctl/trigger.hpp"

namespace hybridctl {

/// Configuration rejection with enough context for a one-line diagnostic.
struct ConfigError : std::runtime_error {
    enum class Kind { parse, validation };
    Kind kind;
    int line;  // 1-based; 0 when not tied to a line
    std::string key;

    ConfigError(Kind k, int ln, std::string key_, const std::string& msg)
        : std::runtime_error(msg), kind(k), line(ln), key(std::move(key_)) {}
};

enum class ModelChoice { builtin, custom };

/// Flat experiment description. Unset keys take the documented defaults,
/// which reproduce the built-in scalar example.
struct RunConfig {
    ModelChoice model = ModelChoice::builtin;
    double b = -0.1;
    double k = -0.2;
    double r = 16.0;
    double phi = 1.0;  // constant initial segment
    double beta = -0.293;

    Mode mode = Mode::open_loop;
    double h = 0.666;
    std::size_t zeno_cap = 10000;

    double sigma0 = 0.36;
    double chi_exp = 2.0;
    double alpha1_exp = 2.0;

    double dt = 1e-3;
    double horizon = 100.0;
    double tol_event = 1e-9;
    Interp interpolation = Interp::linear;

    double q = 3.0;
    std::optional<double> target_h;

    std::string out_dir = "out";
    bool svg = false;
    /// No randomness anywhere in scope; echoed into summaries.
    static constexpr bool random_free = true;

    SystemModel make_model() const;
    InitialFn make_initial() const;
    TriggerRule make_rule() const;
    ControllerMode make_controller() const;
    SolverConfig make_solver() const;
};

/// Parse the flat `key = value` format (one pair per line, '#' comments).
/// Unknown keys and malformed values are rejected with their line number;
/// overrides (from --set) are applied on top before validation.
RunConfig parse_config(const std::string& text,
                       const std::vector<std::pair<std::string, std::string>>& overrides = {});

}  // namespace hybridctl
