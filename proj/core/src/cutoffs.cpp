#include "discovery/cutoffs.hpp"

#include <cmath>
#include <stdexcept>

namespace discovery {

namespace {

void check_params(double sigma1, double sigma2, double rho) {
    if (!(sigma1 > 0.0) || !(sigma2 > 0.0)) {
        throw std::invalid_argument("sds must be positive");
    }
    if (!(rho > 0.0) || !(rho < 1.0)) {
        throw std::domain_error("rho must lie in (0, 1)");
    }
}

struct Scales {
    double spoil;
    double improve;
};

Scales project_scales(double sigma1, double sigma2, double rho, int project) {
    if (project == 1) return {rho * sigma2, sigma1 + rho * sigma2};
    if (project == 2) return {sigma2, sigma2 + rho * sigma1};
    throw std::invalid_argument("project must be 1 or 2");
}

} // namespace

double c_star(double sigma1, double sigma2, double rho) {
    check_params(sigma1, sigma2, rho);
    return rho * sigma2 / (sigma1 + 2.0 * rho * sigma2);
}

double c_star_star(double sigma1, double sigma2, double rho) {
    check_params(sigma1, sigma2, rho);
    return sigma2 / (rho * sigma1 + 2.0 * sigma2);
}

double c_ell(double sigma1, double sigma2, double rho) {
    check_params(sigma1, sigma2, rho);
    const double s = std::sqrt(sigma1 * sigma1 + sigma2 * sigma2 + 2.0 * rho * sigma1 * sigma2);
    return rho * sigma2 / (rho * sigma2 + s);
}

double c_h(double sigma1, double sigma2, double rho) {
    check_params(sigma1, sigma2, rho);
    return sigma2 / (sigma1 + (1.0 + rho) * sigma2);
}

CutoffResult cutoff_vs_no_discovery(double mu, double sigma1, double sigma2, double rho,
                                    double w1, int project) {
    check_params(sigma1, sigma2, rho);
    if (mu == 0.0) {
        throw std::domain_error("mu = 0 is degenerate: both indifference sides are constants");
    }
    if (!(mu > 0.0) || !std::isfinite(mu)) {
        throw std::domain_error("mu must be positive and finite");
    }
    if (!(w1 > 0.0) || !(w1 < 1.0)) {
        throw std::invalid_argument("w1 must lie in (0, 1)");
    }

    const Scales sc = project_scales(sigma1, sigma2, rho, project);
    const double log_ratio = std::log((1.0 - w1) / w1);
    // H(c) = log((1-w1)/w1) + log Phi(-c*mu/spoil) - log Phi(-(1-c)*mu/improve);
    // discovery beats nothing iff H < 0. Strictly decreasing in c.
    auto h = [&](double c) {
        return log_ratio + log_std_normal_cdf(-c * mu / sc.spoil) -
               log_std_normal_cdf(-(1.0 - c) * mu / sc.improve);
    };

    CutoffResult out;
    if (h(0.0) <= 0.0) {
        out.c = 0.0;
        out.boundary = CutoffBoundary::AlwaysDiscover;
        return out;
    }
    if (h(1.0) >= 0.0) {
        out.c = 1.0;
        out.boundary = CutoffBoundary::NeverDiscover;
        return out;
    }
    double lo = 0.0, hi = 1.0;
    int it = 0;
    while (hi - lo > 1e-13 && it < 200) {
        const double mid = 0.5 * (lo + hi);
        (h(mid) > 0.0 ? lo : hi) = mid;
        ++it;
    }
    out.c = 0.5 * (lo + hi);
    out.boundary = CutoffBoundary::Interior;
    out.bracket_width = hi - lo;
    out.iterations = it;
    const double lhs = ((1.0 - w1) / w1) * std_normal_cdf(-out.c * mu / sc.spoil);
    const double rhs = std_normal_cdf(-(1.0 - out.c) * mu / sc.improve);
    out.residual = lhs - rhs;
    return out;
}

double cutoff_derivative(double mu, double c, double sigma1, double sigma2, double rho,
                         double w1, int project) {
    check_params(sigma1, sigma2, rho);
    const Scales sc = project_scales(sigma1, sigma2, rho, project);
    const double ratio = (1.0 - w1) / w1;
    const double a = c * mu / sc.spoil;            // phi argument, spoil side
    const double b = (1.0 - c) * mu / sc.improve;  // phi argument, improve side
    // r = phi(a)/phi(b) computed through the exponent difference.
    const double r = std::exp(0.5 * (b * b - a * a));
    const double num = -ratio * c / sc.spoil * r + (1.0 - c) / sc.improve;
    const double den = ratio * mu / sc.spoil * r + mu / sc.improve;
    return num / den;
}

std::vector<CurvePoint> trace_cutoff_curve(const std::vector<double>& mu_grid, double sigma1,
                                           double sigma2, double rho, double w1, int project) {
    std::vector<CurvePoint> curve;
    curve.reserve(mu_grid.size());
    for (double mu : mu_grid) {
        curve.push_back({mu, cutoff_vs_no_discovery(mu, sigma1, sigma2, rho, w1, project)});
    }
    return curve;
}

CNoTrace c_no_curve(double sigma1, double sigma2, double rho,
                    const std::vector<double>& mu_grid) {
    check_params(sigma1, sigma2, rho);
    if (mu_grid.empty()) throw std::invalid_argument("mu grid must be nonempty");

    const Weights half{{0.5, 0.5}};
    const double sum_sd =
        std::sqrt(sigma1 * sigma1 + sigma2 * sigma2 + 2.0 * rho * sigma1 * sigma2);
    // Pi^b - 1/2 = (Phi(-(1-c)mu/s) - P(v1<0, v2<0)) / 2. Once mu/sigma1 is
    // deep in the tail, positive dependence pins P(both < 0) between
    // Phi(-c*mu/sigma2)*(1 - Phi(-mu/sigma1)) and Phi(-c*mu/sigma2), so the
    // sign comparison moves to log space instead of underflowing.
    auto gap = [&](double mu, double c) {
        const double x1 = mu / sigma1;
        if (x1 > 8.0) {
            return log_std_normal_cdf(-(1.0 - c) * mu / sum_sd) -
                   log_std_normal_cdf(-c * mu / sigma2);
        }
        PriorSpec prior{{-mu, c * mu}, {sigma1, sigma2}, rho};
        return utility_discover_both(prior, half) - utility_no_discovery(prior, half);
    };

    CNoTrace trace;
    for (double mu : mu_grid) {
        if (!(mu > 0.0)) throw std::domain_error("mu grid entries must be positive");
        CNoPoint pt;
        pt.mu = mu;
        const double g0 = gap(mu, 0.0);
        const double g1 = gap(mu, std::nextafter(1.0, 0.0));
        if (g0 >= 0.0) {
            pt.status = CNoStatus::AlwaysBoth;
            pt.c = 0.0;
        } else if (g1 <= 0.0) {
            pt.status = CNoStatus::NeverBoth;
            pt.c = 1.0;
        } else {
            double lo = 0.0, hi = 1.0;
            for (int it = 0; it < 60 && hi - lo > 1e-11; ++it) {
                const double mid = 0.5 * (lo + hi);
                (gap(mu, mid) < 0.0 ? lo : hi) = mid;
            }
            pt.status = CNoStatus::Interior;
            pt.c = 0.5 * (lo + hi);
        }
        trace.points.push_back(pt);
    }
    trace.c_no_estimate = trace.points.back().c;
    const std::size_t half_idx = trace.points.size() / 2;
    trace.convergence_gap = std::fabs(trace.points.back().c - trace.points[half_idx].c);
    return trace;
}

} // namespace discovery
