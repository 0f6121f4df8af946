#pragma once

#include <functional>
#include <optional>
#include <stdexcept>
#include <string>

namespace hybridctl {

/// Constants of the scalar linear example family. V(x) = x^2 with
/// alpha1(s) = alpha2(s) = s^2 is fixed for this family.
struct ExampleConstants {
    double b = -0.1;       // delayed-term coefficient
    double k = -0.2;       // feedback gain
    double r = 16.0;       // delay (seconds)
    double sigma0 = 0.36;  // trigger ratio (e^2 = sigma0 x^2)
    double q = 3.0;        // Razumikhin constant (> 1)
    double h = 0.666;      // dwell (seconds)
    double beta = -0.293;  // impulse gain
    double rho = 0.0;      // Lyapunov jump factor, rho = (1 + beta)^2
    double cbar = 0.0;     // growth rate on dwell intervals
    double c = 0.0;        // decay rate of the triggered closed loop
};

/// k + sqrt(q) |b| + sqrt(sigma0) |k|; negative iff the feedback stability
/// inequality holds.
double feedback_margin(double k, double b, double q, double sigma0);

enum class CbarMode { full, impulsive_only };

/// Growth-rate constant: 2 sqrt(q) (|b| + |k|) in full mode, 2 sqrt(q) |b|
/// when the feedback input is absent.
double cbar(double q, double abs_b, double abs_k, CbarMode mode);

struct ConditionIII {
    bool pass = false;
    double q = 0.0;
    double rho = 0.0;
    double inv_rho = 0.0;
    double exp_cbar_h = 0.0;
    double gap_q = 0.0;    // q - 1/rho
    double gap_exp = 0.0;  // 1/rho - e^{cbar h}
};

/// Strict check of q > 1/rho > e^{cbar h}, with both gaps reported.
ConditionIII condition_iii_check(double q, double rho, double cbar_value, double h);

using CbarFn = std::function<double(double)>;

struct DwellBound {
    double q_star = 0.0;
    double h_max = 0.0;
    bool divergent = false;      // G unbounded on the search window
    bool grid_fallback = false;  // sampled objective was not unimodal
};

/// Maximize G(q) = ln(q) / cbar(q) over q > 1: grid bracketing plus
/// golden-section refinement. The result bounds every admissible dwell.
DwellBound dwell_bound(const CbarFn& cbar_of_q);

struct RootPair {
    double q1 = 0.0;
    double q2 = 0.0;
};

/// Thrown when a requested dwell cannot satisfy the fixed-point condition.
struct InfeasibleDwell : std::runtime_error {
    double h_max;
    explicit InfeasibleDwell(double hm)
        : std::runtime_error("dwell is not below the admissible bound"), h_max(hm) {}
};

/// The two roots of H(q) = q - e^{cbar(q) h}; H > 0 strictly between them.
/// Requires h < h_max of dwell_bound (otherwise InfeasibleDwell).
RootPair fixed_point_roots(double h, const CbarFn& cbar_of_q);

struct RhoInterval {
    double lo = 0.0;  // 1/q2
    double hi = 0.0;  // 1/q1
};

RhoInterval rho_interval(double q1, double q2);

struct CertificateReport {
    double feedback_margin_value = 0.0;
    bool feedback_ok = false;
    double cbar_value = 0.0;
    ConditionIII condition_iii;
    DwellBound dwell;
    RootPair roots;
    RhoInterval rho_bounds;
    ExampleConstants selected;
    std::string narrative;
};

struct SelectionOptions {
    std::optional<double> target_h;  // must be < h_max when given
    std::optional<double> beta;      // fixes rho = (1 + beta)^2
    std::optional<double> rho;       // direct jump factor
    std::optional<double> q;         // Razumikhin constant to certify with
    double sigma0 = 0.36;
    /// Recover beta from rho on the contraction branch beta = sqrt(rho) - 1.
    /// The expansion branch beta = -sqrt(rho) - 1 is available but not default.
    bool negative_beta_branch = true;
};

/// Dwell bound -> dwell -> fixed-point roots -> rho interval -> jump factor
/// and Razumikhin constant, with every condition re-checked into the report.
CertificateReport select_parameters(double b, double k, const SelectionOptions& opts = {});

}  // namespace hybridctl
