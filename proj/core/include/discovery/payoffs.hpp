#pragma once

#include "discovery/gaussian.hpp"
#include "discovery/proposal.hpp"

#include <optional>
#include <string>
#include <vector>

namespace discovery {

enum class RuleKind { NoDiscovery, One, Both, Noisy, Sequential };

struct DiscoveryRule {
    RuleKind kind = RuleKind::NoDiscovery;
    std::size_t project = 0; // One / Noisy
    double tau = 0.0;        // Noisy signal sd, value units

    static DiscoveryRule none() { return {RuleKind::NoDiscovery, 0, 0.0}; }
    static DiscoveryRule one(std::size_t i) { return {RuleKind::One, i, 0.0}; }
    static DiscoveryRule both() { return {RuleKind::Both, 0, 0.0}; }
    static DiscoveryRule noisy(std::size_t i, double tau) { return {RuleKind::Noisy, i, tau}; }
    static DiscoveryRule sequential() { return {RuleKind::Sequential, 0, 0.0}; }
};

bool operator==(const DiscoveryRule& a, const DiscoveryRule& b);
std::string to_string(const DiscoveryRule& rule);

/// Fixed order used to break exact payoff ties deterministically:
/// NoDiscovery < One(1) < One(2) < ... < Both < Noisy < Sequential.
int rule_order_key(const DiscoveryRule& rule);

struct MarginEntry {
    DiscoveryRule a, b;
    double diff = 0.0; // utility(a) - utility(b)
};

struct PayoffReport {
    std::vector<std::pair<DiscoveryRule, double>> per_rule;
    DiscoveryRule best_rule;
    std::vector<MarginEntry> margins;

    double utility_of(const DiscoveryRule& rule) const;
};

/// Payoff of the best proposal at the prior means; deterministic.
double utility_no_discovery(const PriorSpec& prior, const Weights& weights);

/// Expected best-proposal payoff after exact public discovery of project i:
/// the approval-breakpoint step function integrated against v_i's marginal.
/// Works for any n <= 16; requires rho in (0, 1).
double utility_discover_one(const PriorSpec& prior, const Weights& weights, std::size_t i);

/// Two-project closed form for utility_discover_one, valid when exactly one
/// mean is negative and the other nonnegative (the decomposition
/// w_d*P(bundle) + w_f*P(belief_f >= 0)). Empty when the sign pattern or
/// n == 2 does not hold.
std::optional<double> single_discovery_closed_form(const PriorSpec& prior,
                                                   const Weights& weights, std::size_t i);

/// Expected payoff when both projects' values are revealed (n == 2):
/// P(v1+v2 >= 0) + w1*P(v1 >= 0, v1+v2 < 0) + w2*P(v2 >= 0, v1+v2 < 0),
/// the rectangle probabilities evaluated on the exactly transformed
/// (v_i, v1+v2) standard bivariate pairs.
double utility_discover_both(const PriorSpec& prior, const Weights& weights);

/// P(the grand bundle is approvable) under a rule (n == 2, one-shot rules).
double utility_grand_bundle(const PriorSpec& prior, const DiscoveryRule& rule);

/// P(at least one project is approvable) under a rule. Requires every prior
/// mean < 0 (otherwise approval is free and the comparison degenerate).
double utility_at_least_one(const PriorSpec& prior, const DiscoveryRule& rule);

enum class CutoffBoundary { Interior, AlwaysDiscover, NeverDiscover };

struct PerfectCorrelationResult {
    DiscoveryRule rule;               // NoDiscovery or Both at the queried c
    double cutoff = 0.0;              // c threshold for discovery
    CutoffBoundary boundary = CutoffBoundary::Interior;
    int iterations = 0;
    double payoff_gap = 0.0;          // discovery minus no-discovery at queried c
};

/// rho = 1 policy: one discovery reveals the common shock, so the exact
/// expected payoff of full revelation is a two-threshold step function in
/// closed form. The cutoff in c comes from bisecting that exact payoff gap;
/// boundary cases are detected from the gap's endpoint signs.
/// mu_i < 0 is the disfavored mean; the favored mean is c * |mu_i|.
PerfectCorrelationResult perfect_correlation_policy(double mu_i, double c,
                                                    const std::pair<double, double>& sds,
                                                    double w_j);

/// Evaluate every allowed rule (NoDiscovery/One/Both/Noisy) and rank them.
PayoffReport payoff_report(const PriorSpec& prior, const Weights& weights,
                           const std::vector<DiscoveryRule>& allowed);

/// Sign and magnitude of a payoff difference. The magnitude may underflow to
/// zero in the large-mu limit while the sign, computed in log space, stays
/// exact.
struct SignedMargin {
    int sign = 0; // -1, 0, +1
    double abs = 0.0;
};

/// Pi^p - (no-discovery payoff) in the mu1 = -mu < 0 <= c*mu = mu2
/// parametrization, project p in {1, 2}; stable for arbitrarily large mu.
SignedMargin margin_one_vs_none(double mu, double c, double sigma1, double sigma2,
                                double rho, double w1, int project);

/// Pi^1 - Pi^2 in the same parametrization, stable for large mu.
SignedMargin margin_one1_vs_one2(double mu, double c, double sigma1, double sigma2,
                                 double rho, double w1);

} // namespace discovery
