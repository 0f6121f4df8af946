#pragma once

#include <filesystem>
#include <string>

#include "hybridctl/analysis.hpp"
#include "hybridctl/certificates.hpp"
#include "hybridctl/config.hpp"
#include "hybridctl/simulation.hpp"

namespace hybridctl {

/// Doubles are rendered with 17 significant digits so every file round-trips
/// bit-exactly.
std::string format_double(double v);

/// Write content to path atomically (temp file in the same directory, then
/// rename).
void atomic_write(const std::filesystem::path& path, const std::string& content);

/// Trajectory CSV with columns exactly `t,x[0..n),u[0..m),event_flag`;
/// event_flag is 0 (plain sample), 1 (feedback update) or 2 (impulse). A
/// jump sample is emitted as two rows at the same time, left limit first.
std::string trajectory_csv(const SimResult& result);

/// Event log CSV: `time,kind,x_before[..],x_after[..],u_after[..]` with kind
/// `feedback` or `impulse`.
std::string events_csv(const SimResult& result);

/// Structured run summary (JSON).
std::string summary_json(const RunConfig& cfg, const SimResult& result);

/// Certificate report rendered as JSON.
std::string certificate_json(const CertificateReport& report);

/// Human-readable certificate report.
std::string certificate_text(const CertificateReport& report);

/// Zeno diagnostics rendered as JSON (oracle comparison included).
std::string zeno_json(const ZenoReport& report, const OracleComparison& cmp,
                      const ZenoOracle& oracle);

/// Self-contained SVG line chart of the first state component with event and
/// impulse ticks.
std::string trajectory_svg(const SimResult& result);

struct RunArtifacts {
    std::filesystem::path trajectory;
    std::filesystem::path events;
    std::filesystem::path summary;
    std::filesystem::path svg;  // empty unless requested
};

/// Emit the standard artifact set for one run into out_dir.
RunArtifacts write_run_artifacts(const std::filesystem::path& out_dir, const RunConfig& cfg,
                                 const SimResult& result);

}  // namespace hybridctl
