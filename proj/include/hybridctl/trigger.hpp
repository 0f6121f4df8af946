#pragma once

#include <functional>

#include "hybridctl/types.hpp"

namespace hybridctl {

using ScalarFn = std::function<double(double)>;

/// Execution rule chi(||e||) <= sigma * alpha1(||x||) with class-K-infinity
/// comparison functions. The event fires when equality is reached.
struct TriggerRule {
    ScalarFn chi;
    ScalarFn alpha1;
    double sigma = 1.0;

    /// chi(s) = s^chi_exp, alpha1(s) = s^alpha1_exp. With both exponents 2 the
    /// rule reduces to ||e||^2 = sigma ||x||^2, the scalar-example form.
    static TriggerRule power_rule(double sigma, double chi_exp = 2.0, double alpha1_exp = 2.0);

    void validate() const;
};

/// sigma * alpha1(||x||) - chi(||e||); the event fires when this reaches 0
/// from above.
double trigger_margin(const Vec& x, const Vec& e, const TriggerRule& rule);

/// Bisect a bracketed sign change of the margin down to width <= tol and
/// return the crossing-time estimate. The bracket must satisfy
/// margin_at(t_lo) > 0 >= margin_at(t_hi); if the margin is already
/// nonpositive at t_lo, t_lo itself is returned. The returned time is the
/// last bracketed time with positive margin, so the estimate never lands past
/// the crossing: committed states keep the rule satisfied, which matters when
/// events accumulate and the bracket collapses to float resolution.
double locate_crossing(const std::function<double(double)>& margin_at, double t_lo, double t_hi,
                       double tol);

}  // namespace hybridctl
