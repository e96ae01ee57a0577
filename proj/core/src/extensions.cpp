#include "discovery/extensions.hpp"

#include "discovery/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace discovery {

NoisyTransform noisy_effective_prior(const PriorSpec& prior, const NoisySignalSpec& spec) {
    prior.validate();
    if (spec.project >= prior.n()) throw std::invalid_argument("project index out of range");
    if (!(spec.tau >= 0.0) || !std::isfinite(spec.tau)) {
        throw std::invalid_argument("tau must be nonnegative and finite");
    }
    NoisyTransform out;
    out.project = spec.project;
    out.effective_prior = prior;
    if (spec.tau > 0.0) {
        const double si = prior.sds[spec.project];
        const double denom = std::sqrt(si * si + spec.tau * spec.tau);
        out.effective_prior.sds[spec.project] = si * si / denom;
        out.effective_prior.rho = prior.rho * si / denom;
    }
    return out;
}

double utility_noisy(const PriorSpec& prior, const Weights& weights,
                     const NoisySignalSpec& spec) {
    const NoisyTransform t = noisy_effective_prior(prior, spec);
    return utility_discover_one(t.effective_prior, weights, t.project);
}

double n_project_utility(const PriorSpec& prior, const Weights& weights, std::size_t i) {
    prior.validate();
    if (prior.n() > 16) throw std::invalid_argument("n_project_utility supports n <= 16");
    return utility_discover_one(prior, weights, i);
}

namespace {

std::size_t negative_mean_index(const PriorSpec& prior, const char* op) {
    std::size_t neg = prior.n();
    for (std::size_t k = 0; k < prior.n(); ++k) {
        if (prior.means[k] < 0.0) {
            if (neg != prior.n()) {
                throw std::domain_error(std::string(op) +
                                        " requires exactly one negative-mean project");
            }
            neg = k;
        }
    }
    if (neg == prior.n()) {
        throw std::domain_error(std::string(op) + " requires one negative-mean project");
    }
    return neg;
}

} // namespace

NBestSingle n_best_single(const PriorSpec& prior, const Weights& weights) {
    prior.validate();
    negative_mean_index(prior, "n_best_single");

    std::vector<DiscoveryRule> rules = {DiscoveryRule::none()};
    for (std::size_t k = 0; k < prior.n(); ++k) rules.push_back(DiscoveryRule::one(k));

    NBestSingle out;
    out.report = payoff_report(prior, weights, rules);
    if (out.report.best_rule.kind == RuleKind::One) {
        out.best = out.report.best_rule.project;
    }
    return out;
}

CutoffResult n_single_cutoff(const PriorSpec& prior, const Weights& weights, std::size_t k,
                             std::size_t j) {
    prior.validate();
    const std::size_t neg = negative_mean_index(prior, "n_single_cutoff");
    if (j == neg) throw std::invalid_argument("the swept project j must have mean >= 0");
    if (k >= prior.n() || j >= prior.n()) {
        throw std::invalid_argument("project index out of range");
    }
    const double mu = -prior.means[neg];
    double other_c = 0.0;
    for (std::size_t l = 0; l < prior.n(); ++l) {
        if (l != neg && l != j) other_c += prior.means[l] / mu;
    }
    const double c_cap = std::max(0.0, 1.0 - other_c);

    auto gap = [&](double cj) {
        PriorSpec varied = prior;
        varied.means[j] = cj * mu;
        return n_project_utility(varied, weights, k) - utility_no_discovery(varied, weights);
    };

    CutoffResult out;
    if (gap(0.0) >= 0.0) {
        out.c = 0.0;
        out.boundary = CutoffBoundary::AlwaysDiscover;
        return out;
    }
    if (gap(c_cap) <= 0.0) {
        out.c = c_cap;
        out.boundary = CutoffBoundary::NeverDiscover;
        return out;
    }
    double lo = 0.0, hi = c_cap;
    int it = 0;
    while (hi - lo > 1e-11 && it < 100) {
        const double mid = 0.5 * (lo + hi);
        (gap(mid) < 0.0 ? lo : hi) = mid;
        ++it;
    }
    out.c = 0.5 * (lo + hi);
    out.boundary = CutoffBoundary::Interior;
    out.bracket_width = hi - lo;
    out.iterations = it;
    out.residual = gap(out.c);
    return out;
}

namespace {

// Best-proposal payoff when the first-discovered value v is known exactly and
// the other project's belief will be the revealed v_j: a step function of v_j
// whose expectation under the conditional posterior is a Phi sum.
double continuation_value(double v, double post_mean, double post_sd, double w_first,
                          double w_second) {
    auto cdf = [&](double t) { return std_normal_cdf((t - post_mean) / post_sd); };
    if (v >= 0.0) {
        // Bundle passes for v_j >= -v, else the discovered project alone.
        return w_first + (1.0 - w_first) * (1.0 - cdf(-v));
    }
    // v < 0: nothing below 0, the second project alone on [0, -v), bundle above.
    return w_second * (cdf(-v) - cdf(0.0)) + (1.0 - cdf(-v));
}

struct Panel {
    double lo, hi;
};

} // namespace

SequentialValue sequential_value(const PriorSpec& prior, const Weights& weights) {
    prior.validate();
    weights.validate();
    if (prior.n() != 2) {
        throw std::invalid_argument("sequential_value supports exactly 2 projects");
    }
    if (!(prior.rho > 0.0) || !(prior.rho < 1.0)) {
        throw std::domain_error("sequential_value requires rho in (0, 1)");
    }

    static const QuadRule rule_base = gauss_legendre(101);
    static const QuadRule rule_fine = gauss_legendre(203);

    SequentialValue out;
    out.value_no_discovery = utility_no_discovery(prior, weights);
    out.value_both_first = utility_discover_both(prior, weights);

    std::vector<RealizationInterval> policy_regions[2];
    for (std::size_t i = 0; i < 2; ++i) {
        const std::size_t j = 1 - i;
        const StepFunction stop = approval_breakpoints(prior, weights, i);
        const double mean = prior.means[i];
        const double sd = prior.sds[i];
        const double slope = prior.rho * prior.sds[j] / prior.sds[i];
        const double post_sd = prior.sds[j] * std::sqrt(1.0 - prior.rho * prior.rho);

        auto cont = [&](double v) {
            const double post_mean = prior.means[j] + slope * (v - prior.means[i]);
            return continuation_value(v, post_mean, post_sd, weights.w[i], weights.w[j]);
        };

        // Panels: stop breakpoints, the discovered project's own approval
        // switch at 0 (cont jumps there), then stop/continue crossings. Around
        // every threshold cont ramps over a width set by the posterior sd;
        // boxing that ramp into its own narrow panel keeps each panel's
        // integrand polynomial-tame for the fixed rule even as rho -> 1.
        std::vector<double> edges = stop.thresholds;
        edges.push_back(0.0);
        const double ramp = 24.0 * post_sd / (1.0 + slope);
        for (double t : stop.thresholds) {
            edges.push_back(t - ramp);
            edges.push_back(t + ramp);
        }
        edges.push_back(-ramp);
        edges.push_back(ramp);
        const double lo_lim = mean - 10.0 * sd;
        const double hi_lim = mean + 10.0 * sd;
        edges.push_back(lo_lim);
        edges.push_back(hi_lim);
        std::sort(edges.begin(), edges.end());
        edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
        edges.erase(std::remove_if(edges.begin(), edges.end(),
                                   [&](double e) { return e < lo_lim || e > hi_lim; }),
                    edges.end());
        if (edges.empty() || edges.front() > lo_lim) edges.insert(edges.begin(), lo_lim);
        if (edges.back() < hi_lim) edges.push_back(hi_lim);

        std::vector<Panel> panels;
        for (std::size_t e = 0; e + 1 < edges.size(); ++e) {
            double a = edges[e], b = edges[e + 1];
            if (!(b > a)) continue;
            // cont is monotone within a stop panel; locate the single crossing.
            const double eps = 1e-12 * (1.0 + std::fabs(a) + std::fabs(b));
            const double level = stop(0.5 * (a + b));
            const double ga = cont(a + eps) - level;
            const double gb = cont(b - eps) - level;
            if ((ga < 0.0) != (gb < 0.0)) {
                double clo = a, chi = b;
                double flo = ga;
                for (int it = 0; it < 80 && chi - clo > eps; ++it) {
                    const double mid = 0.5 * (clo + chi);
                    const double fm = cont(mid) - level;
                    if ((flo < 0.0) == (fm < 0.0)) {
                        clo = mid;
                        flo = fm;
                    } else {
                        chi = mid;
                    }
                }
                const double cross = 0.5 * (clo + chi);
                panels.push_back({a, cross});
                panels.push_back({cross, b});
            } else {
                panels.push_back({a, b});
            }
        }

        auto integrand = [&](double v) {
            return std::max(stop(v), cont(v)) * std_normal_pdf((v - mean) / sd) / sd;
        };
        double coarse = 0.0, fine = 0.0;
        for (const Panel& panel : panels) {
            coarse += integrate_gl(integrand, panel.lo, panel.hi, rule_base);
            fine += integrate_gl(integrand, panel.lo, panel.hi, rule_fine);
        }
        if (std::fabs(fine - coarse) > 1e-8) {
            throw std::runtime_error("sequential_value quadrature did not converge");
        }
        out.value_one[i] = fine;

        // Continuation policy: merge panels where continuing wins.
        std::vector<RealizationInterval>& regions = policy_regions[i];
        for (const Panel& panel : panels) {
            const double mid = 0.5 * (panel.lo + panel.hi);
            if (cont(mid) > stop(mid)) {
                if (!regions.empty() && regions.back().hi == panel.lo) {
                    regions.back().hi = panel.hi;
                } else {
                    regions.push_back({panel.lo, panel.hi});
                }
            }
        }
    }

    // Rank first moves; deterministic tie order mirrors payoff_report.
    struct Move {
        DiscoveryRule rule;
        double value;
    };
    std::vector<Move> moves = {{DiscoveryRule::none(), out.value_no_discovery},
                               {DiscoveryRule::one(0), out.value_one[0]},
                               {DiscoveryRule::one(1), out.value_one[1]},
                               {DiscoveryRule::both(), out.value_both_first}};
    std::size_t best = 0;
    for (std::size_t k = 1; k < moves.size(); ++k) {
        if (moves[k].value > moves[best].value ||
            (moves[k].value == moves[best].value &&
             rule_order_key(moves[k].rule) < rule_order_key(moves[best].rule))) {
            best = k;
        }
    }
    out.value = moves[best].value;
    out.policy.first = moves[best].rule;
    if (moves[best].rule.kind == RuleKind::One) {
        out.policy.second_project = 1 - moves[best].rule.project;
        out.policy.continue_regions = policy_regions[moves[best].rule.project];
    }
    out.both_strict_argmax =
        out.value_both_first > std::max({out.value_no_discovery, out.value_one[0],
                                         out.value_one[1]}) + 1e-12;
    return out;
}

} // namespace discovery
