#include "hybridctl/trigger.hpp"

#include <cmath>
#include <stdexcept>

namespace hybridctl {

TriggerRule TriggerRule::power_rule(double sigma, double chi_exp, double alpha1_exp) {
    if (!(chi_exp > 0.0) || !(alpha1_exp > 0.0))
        throw std::invalid_argument("power_rule: exponents must be positive");
    TriggerRule r;
    r.sigma = sigma;
    r.chi = [chi_exp](double s) { return std::pow(s, chi_exp); };
    r.alpha1 = [alpha1_exp](double s) { return std::pow(s, alpha1_exp); };
    return r;
}

void TriggerRule::validate() const {
    if (!chi || !alpha1) throw std::invalid_argument("TriggerRule: chi and alpha1 must be set");
    if (!(sigma > 0.0)) throw std::invalid_argument("TriggerRule: sigma must be positive");
    if (chi(0.0) != 0.0 || alpha1(0.0) != 0.0)
        throw std::invalid_argument("TriggerRule: comparison functions must vanish at 0");
}

double trigger_margin(const Vec& x, const Vec& e, const TriggerRule& rule) {
    return rule.sigma * rule.alpha1(norm(x)) - rule.chi(norm(e));
}

double locate_crossing(const std::function<double(double)>& margin_at, double t_lo, double t_hi,
                       double tol) {
    if (!(tol > 0.0)) throw std::invalid_argument("locate_crossing: tol must be positive");
    if (!(t_hi >= t_lo)) throw std::invalid_argument("locate_crossing: empty bracket");
    double lo = t_lo, hi = t_hi;
    if (margin_at(lo) <= 0.0) return lo;
    if (margin_at(hi) > 0.0)
        throw std::invalid_argument("locate_crossing: no sign change in bracket");
    while (hi - lo > tol) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;  // float resolution exhausted
        if (margin_at(mid) > 0.0)
            lo = mid;
        else
            hi = mid;
    }
    return lo;
}

}  // namespace hybridctl
