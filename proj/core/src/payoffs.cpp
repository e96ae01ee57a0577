#include "discovery/payoffs.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace discovery {

namespace {

// log(e^la - e^lb) for la >= lb; -inf when equal within noise.
double log_diff_exp(double la, double lb) {
    const double d = lb - la;
    if (d > -1e-15) return -std::numeric_limits<double>::infinity();
    return la + std::log1p(-std::exp(d));
}

double clamp_z(double z) { return std::clamp(z, -40.0, 40.0); }

void require_two_projects(const PriorSpec& prior, const char* op) {
    if (prior.n() != 2) {
        throw std::invalid_argument(std::string(op) + " requires exactly 2 projects");
    }
}

void require_open_rho(const PriorSpec& prior, const char* op) {
    if (!(prior.rho > 0.0) || !(prior.rho < 1.0)) {
        throw std::domain_error(std::string(op) + " requires rho in (0, 1)");
    }
}

} // namespace

bool operator==(const DiscoveryRule& a, const DiscoveryRule& b) {
    if (a.kind != b.kind) return false;
    switch (a.kind) {
        case RuleKind::One: return a.project == b.project;
        case RuleKind::Noisy: return a.project == b.project && a.tau == b.tau;
        default: return true;
    }
}

std::string to_string(const DiscoveryRule& rule) {
    switch (rule.kind) {
        case RuleKind::NoDiscovery: return "none";
        case RuleKind::One: return "one:" + std::to_string(rule.project + 1);
        case RuleKind::Both: return "both";
        case RuleKind::Noisy:
            return "noisy:" + std::to_string(rule.project + 1) + ":" + std::to_string(rule.tau);
        case RuleKind::Sequential: return "sequential";
    }
    return "?";
}

int rule_order_key(const DiscoveryRule& rule) {
    switch (rule.kind) {
        case RuleKind::NoDiscovery: return 0;
        case RuleKind::One: return 1 + static_cast<int>(rule.project);
        case RuleKind::Both: return 64;
        case RuleKind::Noisy: return 128 + static_cast<int>(rule.project);
        case RuleKind::Sequential: return 256;
    }
    return 512;
}

double PayoffReport::utility_of(const DiscoveryRule& rule) const {
    for (const auto& [r, u] : per_rule) {
        if (r == rule) return u;
    }
    throw std::invalid_argument("rule not present in report: " + to_string(rule));
}

double utility_no_discovery(const PriorSpec& prior, const Weights& weights) {
    prior.validate();
    return best_proposal(prior.means, weights).payoff;
}

double utility_discover_one(const PriorSpec& prior, const Weights& weights, std::size_t i) {
    prior.validate();
    require_open_rho(prior, "utility_discover_one");
    const StepFunction step = approval_breakpoints(prior, weights, i);
    const double mean = prior.means[i];
    const double sd = prior.sds[i];

    // sum_k level_k * [Phi(z_{k+1}) - Phi(z_k)] over the discovered marginal.
    double total = 0.0;
    double prev_cdf = 0.0;
    for (std::size_t k = 0; k < step.thresholds.size(); ++k) {
        const double cdf = std_normal_cdf(clamp_z((step.thresholds[k] - mean) / sd));
        total += step.levels[k] * (cdf - prev_cdf);
        prev_cdf = cdf;
    }
    total += step.levels.back() * (1.0 - prev_cdf);
    return total;
}

std::optional<double> single_discovery_closed_form(const PriorSpec& prior,
                                                   const Weights& weights, std::size_t i) {
    prior.validate();
    weights.validate();
    if (prior.n() != 2 || weights.n() != 2 || i > 1) return std::nullopt;
    if (!(prior.rho > 0.0) || !(prior.rho < 1.0)) return std::nullopt;

    std::size_t d, f; // disfavored (negative mean), favored (nonnegative mean)
    if (prior.means[0] < 0.0 && prior.means[1] >= 0.0) {
        d = 0;
        f = 1;
    } else if (prior.means[1] < 0.0 && prior.means[0] >= 0.0) {
        d = 1;
        f = 0;
    } else {
        return std::nullopt;
    }

    const double mean_sum = prior.means[0] + prior.means[1];
    const double bundle_scale = prior.sds[i] + prior.rho * prior.sds[1 - i];
    const double p_bundle = std_normal_cdf(clamp_z(mean_sum / bundle_scale));
    const double fav_scale = (i == f) ? prior.sds[f] : prior.rho * prior.sds[f];
    const double p_fav = std_normal_cdf(clamp_z(prior.means[f] / fav_scale));
    return weights.w[d] * p_bundle + weights.w[f] * p_fav;
}

double utility_discover_both(const PriorSpec& prior, const Weights& weights) {
    prior.validate();
    weights.validate();
    require_two_projects(prior, "utility_discover_both");
    if (!(prior.rho < 1.0)) {
        throw std::domain_error("utility_discover_both requires rho < 1; use the "
                                "perfect-correlation path at rho = 1");
    }

    const double s1 = prior.sds[0], s2 = prior.sds[1];
    const double sum_mean = prior.means[0] + prior.means[1];
    const double sum_sd = std::sqrt(s1 * s1 + s2 * s2 + 2.0 * prior.rho * s1 * s2);
    const double y = clamp_z(-sum_mean / sum_sd); // P(sum < 0) threshold, standardized
    const double p_sum_neg = std_normal_cdf(y);

    double u = 1.0 - p_sum_neg; // grand bundle whenever the realized sum clears zero
    for (std::size_t i = 0; i < 2; ++i) {
        const double r = (prior.sds[i] + prior.rho * prior.sds[1 - i]) / sum_sd;
        const double x = clamp_z(-prior.means[i] / prior.sds[i]); // P(v_i < 0) threshold
        const double p_vi_neg_sum_neg = bivariate_rect_prob(x, y, r);
        u += weights.w[i] * (p_sum_neg - p_vi_neg_sum_neg);
    }
    return u;
}

double utility_grand_bundle(const PriorSpec& prior, const DiscoveryRule& rule) {
    prior.validate();
    require_two_projects(prior, "utility_grand_bundle");
    const double sum_mean = prior.means[0] + prior.means[1];
    switch (rule.kind) {
        case RuleKind::NoDiscovery:
            return sum_mean >= 0.0 ? 1.0 : 0.0;
        case RuleKind::One: {
            if (rule.project > 1) throw std::invalid_argument("project index out of range");
            require_open_rho(prior, "utility_grand_bundle(One)");
            const double scale =
                prior.sds[rule.project] + prior.rho * prior.sds[1 - rule.project];
            return std_normal_cdf(clamp_z(sum_mean / scale));
        }
        case RuleKind::Both: {
            const double s1 = prior.sds[0], s2 = prior.sds[1];
            const double scale = std::sqrt(s1 * s1 + s2 * s2 + 2.0 * prior.rho * s1 * s2);
            return std_normal_cdf(clamp_z(sum_mean / scale));
        }
        default:
            throw std::invalid_argument("utility_grand_bundle supports one-shot exact rules");
    }
}

double utility_at_least_one(const PriorSpec& prior, const DiscoveryRule& rule) {
    prior.validate();
    for (double m : prior.means) {
        if (m >= 0.0) {
            throw std::domain_error(
                "utility_at_least_one requires every prior mean < 0 "
                "(approval cannot be obtained with certainty)");
        }
    }
    switch (rule.kind) {
        case RuleKind::NoDiscovery:
            return 0.0;
        case RuleKind::One: {
            if (rule.project >= prior.n()) {
                throw std::invalid_argument("project index out of range");
            }
            require_open_rho(prior, "utility_at_least_one(One)");
            const std::size_t i = rule.project;
            // As v_i rises, some singleton always becomes approvable first.
            double best = std_normal_cdf(clamp_z(prior.means[i] / prior.sds[i]));
            for (std::size_t j = 0; j < prior.n(); ++j) {
                if (j == i) continue;
                best = std::max(
                    best, std_normal_cdf(clamp_z(prior.means[j] / (prior.rho * prior.sds[j]))));
            }
            return best;
        }
        case RuleKind::Both: {
            require_two_projects(prior, "utility_at_least_one(Both)");
            if (!(prior.rho < 1.0)) {
                throw std::domain_error("utility_at_least_one(Both) requires rho < 1");
            }
            const double x1 = clamp_z(-prior.means[0] / prior.sds[0]);
            const double x2 = clamp_z(-prior.means[1] / prior.sds[1]);
            return 1.0 - bivariate_rect_prob(x1, x2, prior.rho);
        }
        default:
            throw std::invalid_argument("utility_at_least_one supports one-shot exact rules");
    }
}

PerfectCorrelationResult perfect_correlation_policy(double mu_i, double c,
                                                    const std::pair<double, double>& sds,
                                                    double w_j) {
    if (!(mu_i < 0.0) || !std::isfinite(mu_i)) {
        throw std::domain_error("perfect_correlation_policy requires mu_i < 0");
    }
    if (!(sds.first > 0.0) || !(sds.second > 0.0)) {
        throw std::invalid_argument("sds must be positive");
    }
    if (!(w_j >= 0.0) || !(w_j <= 1.0)) {
        throw std::invalid_argument("w_j must lie in [0, 1]");
    }
    const double mu = -mu_i;
    const double si = sds.first, sj = sds.second;

    PerfectCorrelationResult out;
    if (c >= 1.0) {
        // mu_i + mu_j >= 0: the grand bundle already passes for sure.
        out.rule = DiscoveryRule::none();
        out.cutoff = 0.0;
        out.boundary = CutoffBoundary::AlwaysDiscover; // discovery is harmless but pointless
        out.payoff_gap = 0.0;
        return out;
    }
    if (c < 0.0) {
        // Both means negative: no discovery pays 0, full discovery can only help.
        out.rule = DiscoveryRule::both();
        out.cutoff = 0.0;
        out.boundary = CutoffBoundary::AlwaysDiscover;
        out.payoff_gap = std::numeric_limits<double>::quiet_NaN();
        return out;
    }

    // One discovery reveals the common shock Z; the realized payoff is the
    // two-threshold step 0 -> w_j -> 1 at Z = -c*mu/sj and Z = (1-c)*mu/(si+sj).
    auto gap = [&](double cc) {
        const double t_bundle = (1.0 - cc) * mu / (si + sj);
        const double t_fav = -cc * mu / sj;
        return (1.0 - w_j) * (1.0 - std_normal_cdf(t_bundle)) -
               w_j * std_normal_cdf(t_fav);
    };

    out.payoff_gap = gap(c);
    const double gap0 = gap(0.0);
    const double gap1 = gap(std::nextafter(1.0, 0.0));
    if (gap0 >= 0.0) {
        out.cutoff = 0.0;
        out.boundary = CutoffBoundary::AlwaysDiscover;
    } else if (gap1 <= 0.0) {
        out.cutoff = 1.0;
        out.boundary = CutoffBoundary::NeverDiscover;
    } else {
        double lo = 0.0, hi = 1.0;
        int it = 0;
        while (hi - lo > 1e-13 && it < 200) {
            const double mid = 0.5 * (lo + hi);
            (gap(mid) < 0.0 ? lo : hi) = mid;
            ++it;
        }
        out.cutoff = 0.5 * (lo + hi);
        out.boundary = CutoffBoundary::Interior;
        out.iterations = it;
    }
    out.rule = out.payoff_gap > 0.0 ? DiscoveryRule::both() : DiscoveryRule::none();
    return out;
}

PayoffReport payoff_report(const PriorSpec& prior, const Weights& weights,
                           const std::vector<DiscoveryRule>& allowed) {
    if (allowed.empty()) throw std::invalid_argument("allowed rule set must be nonempty");
    PayoffReport report;
    for (const DiscoveryRule& rule : allowed) {
        double u = 0.0;
        switch (rule.kind) {
            case RuleKind::NoDiscovery:
                u = utility_no_discovery(prior, weights);
                break;
            case RuleKind::One:
                u = utility_discover_one(prior, weights, rule.project);
                break;
            case RuleKind::Both:
                u = utility_discover_both(prior, weights);
                break;
            case RuleKind::Noisy: {
                if (!(rule.tau >= 0.0)) throw std::invalid_argument("noisy tau must be >= 0");
                if (rule.tau == 0.0) {
                    u = utility_discover_one(prior, weights, rule.project);
                } else {
                    // Exact substitution: the posterior-mean pair after a noisy
                    // signal is the exact-discovery pair of a shrunk prior.
                    PriorSpec eff = prior;
                    const double si = prior.sds[rule.project];
                    const double denom = std::sqrt(si * si + rule.tau * rule.tau);
                    eff.sds[rule.project] = si * si / denom;
                    eff.rho = prior.rho * si / denom;
                    u = utility_discover_one(eff, weights, rule.project);
                }
                break;
            }
            case RuleKind::Sequential:
                throw std::invalid_argument(
                    "payoff_report does not evaluate sequential rules; use sequential_value");
        }
        report.per_rule.emplace_back(rule, u);
    }

    auto better = [](const std::pair<DiscoveryRule, double>& a,
                     const std::pair<DiscoveryRule, double>& b) {
        if (a.second != b.second) return a.second > b.second;
        return rule_order_key(a.first) < rule_order_key(b.first);
    };
    report.best_rule =
        std::max_element(report.per_rule.begin(), report.per_rule.end(),
                         [&](const auto& a, const auto& b) { return better(b, a); })
            ->first;

    for (std::size_t i = 0; i < report.per_rule.size(); ++i) {
        for (std::size_t j = i + 1; j < report.per_rule.size(); ++j) {
            report.margins.push_back({report.per_rule[i].first, report.per_rule[j].first,
                                      report.per_rule[i].second - report.per_rule[j].second});
        }
    }
    return report;
}

namespace {

struct LogTerms {
    double log_improve; // log Phi(-b_p): bundle-improvement probability
    double log_spoil;   // log Phi(-a_p): favored project spoiled
};

LogTerms single_rule_log_terms(double mu, double c, double sigma1, double sigma2, double rho,
                               int project) {
    const double improve_scale =
        (project == 1) ? sigma1 + rho * sigma2 : sigma2 + rho * sigma1;
    const double spoil_scale = (project == 1) ? rho * sigma2 : sigma2;
    return {log_std_normal_cdf(-(1.0 - c) * mu / improve_scale),
            log_std_normal_cdf(-c * mu / spoil_scale)};
}

SignedMargin from_logs(double log_pos, double log_neg) {
    SignedMargin m;
    if (log_pos == log_neg ||
        (log_pos == -std::numeric_limits<double>::infinity() &&
         log_neg == -std::numeric_limits<double>::infinity())) {
        return m; // exact tie
    }
    m.sign = log_pos > log_neg ? 1 : -1;
    const double hi = std::max(log_pos, log_neg);
    const double delta = log_diff_exp(hi, std::min(log_pos, log_neg));
    m.abs = delta > -745.0 ? std::exp(delta) : 0.0;
    return m;
}

} // namespace

SignedMargin margin_one_vs_none(double mu, double c, double sigma1, double sigma2, double rho,
                                double w1, int project) {
    if (!(mu > 0.0)) throw std::domain_error("margin_one_vs_none requires mu > 0");
    const LogTerms t = single_rule_log_terms(mu, c, sigma1, sigma2, rho, project);
    // Pi^p - w2 = w1*Phi(-b_p) - w2*Phi(-a_p)
    return from_logs(std::log(w1) + t.log_improve, std::log(1.0 - w1) + t.log_spoil);
}

SignedMargin margin_one1_vs_one2(double mu, double c, double sigma1, double sigma2, double rho,
                                 double w1) {
    if (!(mu > 0.0)) throw std::domain_error("margin_one1_vs_one2 requires mu > 0");
    const LogTerms t1 = single_rule_log_terms(mu, c, sigma1, sigma2, rho, 1);
    const LogTerms t2 = single_rule_log_terms(mu, c, sigma1, sigma2, rho, 2);

    // Pi^1 - Pi^2 = w1*[Phi(-b1) - Phi(-b2)] + w2*[Phi(-a2) - Phi(-a1)].
    // The spoiling term always favors project 1 (a1 >= a2); the improvement
    // term favors whichever project has the larger reach scale.
    const double lw1 = std::log(w1), lw2 = std::log(1.0 - w1);
    const double spoil_gain = lw2 + log_diff_exp(std::max(t2.log_spoil, t1.log_spoil),
                                                 std::min(t2.log_spoil, t1.log_spoil));
    const bool improve_favors_1 = t1.log_improve >= t2.log_improve;
    const double improve_gap =
        lw1 + log_diff_exp(std::max(t1.log_improve, t2.log_improve),
                           std::min(t1.log_improve, t2.log_improve));

    auto from_log = [](double lp) { return lp > -745.0 ? std::exp(lp) : 0.0; };
    SignedMargin m;
    if (improve_favors_1) {
        // Both components weakly favor project 1.
        const double hi = std::max(spoil_gain, improve_gap);
        if (hi == -std::numeric_limits<double>::infinity()) return m;
        m.sign = 1;
        m.abs = from_log(hi + std::log1p(std::exp(std::min(spoil_gain, improve_gap) - hi)));
        return m;
    }
    return from_logs(spoil_gain, improve_gap);
}

} // namespace discovery
