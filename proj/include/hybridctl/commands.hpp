#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "hybridctl/config.hpp"

namespace hybridctl {

/// Exit-status contract: 0 success, 2 config error, 3 runtime error,
/// 4 zeno-guard termination.
enum ExitCode : int {
    exit_ok = 0,
    exit_config_error = 2,
    exit_runtime_error = 3,
    exit_zeno_guard = 4,
};

struct CommandOptions {
    std::filesystem::path out_dir = "out";
    bool quiet = false;
};

/// Run the configured mode end to end and emit trajectory/events/summary.
int cmd_simulate(const RunConfig& cfg, const CommandOptions& opt, std::ostream& out);

/// Run the certificate pipeline (no simulation).
int cmd_verify(const RunConfig& cfg, const CommandOptions& opt, std::ostream& out);

/// event_only run with the zeno guard plus the closed-form recursion oracle.
int cmd_zeno(const RunConfig& cfg, const CommandOptions& opt, std::ostream& out);

/// hybrid vs impulsive_only on identical constants: update counts and decay
/// fits.
int cmd_compare(const RunConfig& cfg, const CommandOptions& opt, std::ostream& out);

/// Dispatch one simulate run per value of a swept key, concurrently, each
/// into its own subdirectory.
int cmd_sweep(const RunConfig& base_cfg, const std::string& key,
              const std::vector<std::string>& values,
              const std::vector<std::pair<std::string, std::string>>& overrides,
              const std::string& config_text, const CommandOptions& opt, std::ostream& out);

}  // namespace hybridctl
