#include "hybridctl/certificates.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <vector>

namespace hybridctl {

double feedback_margin(double k, double b, double q, double sigma0) {
    if (!(q > 1.0)) throw std::invalid_argument("feedback_margin: q must exceed 1");
    if (!(sigma0 >= 0.0)) throw std::invalid_argument("feedback_margin: sigma0 must be nonnegative");
    return k + std::sqrt(q) * std::abs(b) + std::sqrt(sigma0) * std::abs(k);
}

double cbar(double q, double abs_b, double abs_k, CbarMode mode) {
    if (!(q > 1.0)) throw std::invalid_argument("cbar: q must exceed 1");
    const double gain = mode == CbarMode::full ? abs_b + abs_k : abs_b;
    return 2.0 * std::sqrt(q) * gain;
}

ConditionIII condition_iii_check(double q, double rho, double cbar_value, double h) {
    if (!(q > 1.0)) throw std::invalid_argument("condition_iii_check: q must exceed 1");
    if (!(rho > 0.0)) throw std::invalid_argument("condition_iii_check: rho must be positive");
    if (!(h > 0.0)) throw std::invalid_argument("condition_iii_check: h must be positive");
    ConditionIII c;
    c.q = q;
    c.rho = rho;
    c.inv_rho = 1.0 / rho;
    c.exp_cbar_h = std::exp(cbar_value * h);
    c.gap_q = q - c.inv_rho;
    c.gap_exp = c.inv_rho - c.exp_cbar_h;
    c.pass = (c.gap_q > 0.0) && (c.gap_exp > 0.0);
    return c;
}

namespace {

double objective(const CbarFn& cbar_of_q, double q) {
    const double c = cbar_of_q(q);
    if (!(c > 0.0)) return std::numeric_limits<double>::infinity();
    return std::log(q) / c;
}

// Golden-section maximization on [a, b] for a unimodal objective.
double golden_max(const CbarFn& cbar_of_q, double a, double b) {
    const double phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double x1 = b - phi * (b - a);
    double x2 = a + phi * (b - a);
    double f1 = objective(cbar_of_q, x1);
    double f2 = objective(cbar_of_q, x2);
    while (b - a > 1e-12 * (1.0 + b)) {
        if (f1 < f2) {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + phi * (b - a);
            f2 = objective(cbar_of_q, x2);
        } else {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - phi * (b - a);
            f1 = objective(cbar_of_q, x1);
        }
    }
    return 0.5 * (a + b);
}

}  // namespace

DwellBound dwell_bound(const CbarFn& cbar_of_q) {
    DwellBound out;
    double q_hi = 1e6;
    const double q_lo = 1.0 + 1e-6;
    const int n = 400;

    for (int attempt = 0;; ++attempt) {
        std::vector<double> qs(n), gs(n);
        const double la = std::log(q_lo), lb = std::log(q_hi);
        for (int i = 0; i < n; ++i) {
            qs[i] = std::exp(la + (lb - la) * i / (n - 1));
            gs[i] = objective(cbar_of_q, qs[i]);
            if (std::isinf(gs[i])) {
                // cbar vanished somewhere; the ratio is unbounded there.
                out.divergent = true;
                out.q_star = qs[i];
                out.h_max = std::numeric_limits<double>::infinity();
                return out;
            }
        }
        int best = 0;
        for (int i = 1; i < n; ++i)
            if (gs[i] > gs[best]) best = i;
        if (best == n - 1) {
            if (q_hi >= 1e18) {
                out.divergent = true;
                out.q_star = qs[best];
                out.h_max = gs[best];
                return out;
            }
            q_hi *= 1e4;
            continue;
        }
        int interior_maxima = 0;
        for (int i = 1; i + 1 < n; ++i)
            if (gs[i] >= gs[i - 1] && gs[i] > gs[i + 1]) ++interior_maxima;
        if (interior_maxima > 1) out.grid_fallback = true;

        const double a = best > 0 ? qs[best - 1] : q_lo;
        const double b = qs[best + 1];
        out.q_star = golden_max(cbar_of_q, a, b);
        out.h_max = objective(cbar_of_q, out.q_star);
        return out;
    }
}

namespace {

double bisect_root(const std::function<double(double)>& f, double lo, double hi) {
    // f(lo) and f(hi) must straddle zero; refined to ~1e-12 relative width.
    double flo = f(lo);
    while (hi - lo > 1e-12 * (1.0 + hi)) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        const double fm = f(mid);
        if ((fm <= 0.0) == (flo <= 0.0)) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

}  // namespace

RootPair fixed_point_roots(double h, const CbarFn& cbar_of_q) {
    if (!(h > 0.0)) throw std::invalid_argument("fixed_point_roots: h must be positive");
    const DwellBound bound = dwell_bound(cbar_of_q);
    if (bound.divergent)
        throw std::invalid_argument("fixed_point_roots: objective diverges; no two-root structure");
    if (!(h < bound.h_max)) throw InfeasibleDwell(bound.h_max);

    const auto H = [&](double q) { return q - std::exp(cbar_of_q(q) * h); };
    const double q_star = bound.q_star;
    // H(1) <= 0 and H(q_star) > 0 once h < h_max.
    RootPair roots;
    roots.q1 = bisect_root(H, 1.0, q_star);

    double hi = q_star;
    for (int i = 0; i < 2000 && H(hi) > 0.0; ++i) hi *= 2.0;
    if (H(hi) > 0.0) throw std::runtime_error("fixed_point_roots: no upper root in search window");
    roots.q2 = bisect_root(H, q_star, hi);
    return roots;
}

RhoInterval rho_interval(double q1, double q2) {
    if (!(q1 > 1.0)) throw std::invalid_argument("rho_interval: q1 must exceed 1");
    if (!(q2 > q1)) throw std::invalid_argument("rho_interval: interval is empty (q2 must exceed q1)");
    return {1.0 / q2, 1.0 / q1};
}

CertificateReport select_parameters(double b, double k, const SelectionOptions& opts) {
    CertificateReport rep;
    const double abs_b = std::abs(b), abs_k = std::abs(k);
    const CbarFn cfn = [abs_b, abs_k](double q) {
        return 2.0 * std::sqrt(q) * (abs_b + abs_k);
    };

    rep.dwell = dwell_bound(cfn);
    if (rep.dwell.divergent)
        throw std::invalid_argument("select_parameters: dwell objective diverges for these gains");

    double h = rep.dwell.h_max / 2.0;
    if (opts.target_h) {
        if (!(*opts.target_h < rep.dwell.h_max)) throw InfeasibleDwell(rep.dwell.h_max);
        h = *opts.target_h;
    }

    rep.roots = fixed_point_roots(h, cfn);
    rep.rho_bounds = rho_interval(rep.roots.q1, rep.roots.q2);

    double rho;
    double beta;
    if (opts.beta && opts.rho) {
        const double implied = (1.0 + *opts.beta) * (1.0 + *opts.beta);
        if (std::abs(implied - *opts.rho) > 1e-9 * std::max(1.0, std::abs(*opts.rho)))
            throw std::invalid_argument("select_parameters: beta and rho are inconsistent");
        beta = *opts.beta;
        rho = *opts.rho;
    } else if (opts.beta) {
        beta = *opts.beta;
        rho = (1.0 + beta) * (1.0 + beta);
    } else if (opts.rho) {
        rho = *opts.rho;
        beta = (opts.negative_beta_branch ? 1.0 : -1.0) * std::sqrt(rho) - 1.0;
    } else {
        rho = std::sqrt(rep.rho_bounds.lo * rep.rho_bounds.hi);
        beta = (opts.negative_beta_branch ? 1.0 : -1.0) * std::sqrt(rho) - 1.0;
    }

    double q;
    if (opts.q) {
        q = *opts.q;
    } else {
        // Geometric midpoint of the q-range on which condition (iii) actually
        // holds for this rho: (1/rho, q_up) with e^{cbar(q_up) h} = 1/rho,
        // clipped by the upper fixed-point root. For a rho outside the
        // admissible interval no q works; the midpoint is still reported and
        // the condition check below fails honestly.
        const double inv_rho = 1.0 / rho;
        const double lo = std::max(inv_rho, 1.0 + 1e-12);
        double hi = std::max(rep.roots.q2, lo * (1.0 + 1e-9));
        if (std::exp(cfn(lo) * h) < inv_rho && std::exp(cfn(hi) * h) > inv_rho) {
            const auto g = [&](double qq) { return inv_rho - std::exp(cfn(qq) * h); };
            hi = bisect_root(g, lo, hi);
        }
        q = std::sqrt(lo * hi);
    }

    rep.cbar_value = cfn(q);
    rep.condition_iii = condition_iii_check(q, rho, rep.cbar_value, h);
    rep.feedback_margin_value = feedback_margin(k, b, q, opts.sigma0);
    rep.feedback_ok = rep.feedback_margin_value < 0.0;

    ExampleConstants sel;
    sel.b = b;
    sel.k = k;
    sel.sigma0 = opts.sigma0;
    sel.q = q;
    sel.h = h;
    sel.beta = beta;
    sel.rho = rho;
    sel.cbar = rep.cbar_value;
    // Decay rate of the triggered loop under the quadratic certificate:
    // c = -(2k + 2 sqrt(q) |b| + sqrt(sigma0) |k|).
    sel.c = -(2.0 * k + 2.0 * std::sqrt(q) * abs_b + std::sqrt(opts.sigma0) * abs_k);
    rep.selected = sel;

    std::ostringstream os;
    if (!rep.feedback_ok)
        os << "feedback inequality k + sqrt(q)|b| + sqrt(sigma0)|k| < 0 fails first "
           << "(margin " << rep.feedback_margin_value << ")";
    else if (rep.condition_iii.gap_q <= 0.0)
        os << "condition (iii) fails first: q <= 1/rho";
    else if (rep.condition_iii.gap_exp <= 0.0)
        os << "condition (iii) fails first: 1/rho <= e^{cbar h}";
    else
        os << "all conditions satisfied";
    rep.narrative = os.str();
    return rep;
}

}  // namespace hybridctl
