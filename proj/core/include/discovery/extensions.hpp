#pragma once

#include "discovery/cutoffs.hpp"
#include "discovery/payoffs.hpp"

#include <optional>
#include <vector>

namespace discovery {

struct NoisySignalSpec {
    std::size_t project = 0;
    double tau = 0.0; // signal noise sd, value units; tau = 0 is the exact path
};

/// The posterior-mean pair induced by a noisy signal of project i equals the
/// exact-discovery pair of a shrunk prior: sd_i -> sd_i^2/sqrt(sd_i^2+tau^2)
/// (the posterior-mean marginal of the discovered project) and
/// rho -> rho*sd_i/sqrt(sd_i^2+tau^2), which keeps every undiscovered
/// project's posterior-mean slope rho*sd_j/sd_i intact. Only One(project) is
/// meaningful on the transformed prior.
struct NoisyTransform {
    PriorSpec effective_prior;
    std::size_t project = 0;
};

NoisyTransform noisy_effective_prior(const PriorSpec& prior, const NoisySignalSpec& spec);

/// Expected payoff of discovering a noisy signal of one project: the
/// breakpoint integrator run on the transformed problem. Continuous in tau;
/// tau = 0 reduces to exact discovery, tau -> infinity to no discovery.
double utility_noisy(const PriorSpec& prior, const Weights& weights,
                     const NoisySignalSpec& spec);

/// Exact expected utility of discovering project i among n <= 16 projects
/// (2^n subsets, breakpoint integration). For n = 2 this is the identical
/// code path as utility_discover_one.
double n_project_utility(const PriorSpec& prior, const Weights& weights, std::size_t i);

struct NBestSingle {
    std::optional<std::size_t> best; // empty = NoDiscovery
    PayoffReport report;
};

/// Argmax over {NoDiscovery, One(0..n-1)} under the one-negative-mean premise
/// (exactly one prior mean < 0, the rest >= 0). Ties go to the lowest index.
NBestSingle n_best_single(const PriorSpec& prior, const Weights& weights);

/// Threshold in c_j (mu_j = c_j * mu, mu = -mu_neg) above which discovering
/// project k beats no discovery, holding every other mean fixed. Bisection on
/// the exact utility difference; c_j is capped so the positive means keep
/// sum_j c_j <= 1 (the premise under which the no-discovery payoff is flat).
CutoffResult n_single_cutoff(const PriorSpec& prior, const Weights& weights, std::size_t k,
                             std::size_t j);

struct RealizationInterval {
    double lo = 0.0, hi = 0.0;
};

/// Two-stage policy: a first rule, then per-realization continuation. The
/// continue_regions are the realization intervals of the first-discovered
/// value where revealing the second project beats stopping.
struct SequentialPolicy {
    DiscoveryRule first;
    std::size_t second_project = 0;
    std::vector<RealizationInterval> continue_regions;
};

struct SequentialValue {
    double value = 0.0;
    SequentialPolicy policy;
    double value_no_discovery = 0.0;
    double value_one[2] = {0.0, 0.0}; // with optimal continuation
    double value_both_first = 0.0;    // discovering both at once as the first move
    bool both_strict_argmax = false;
};

/// Two-stage dynamic program for the two-project game: for each first rule
/// One(i), the expectation over the first realization of
/// max(stop-now payoff, continuation value of revealing j). The stop payoff
/// is the approval-breakpoint step function; the continuation value is a
/// closed-form Phi sum against the conditional posterior. Panels are split
/// at the stop breakpoints, the discovered project's own approval switch,
/// and the stop/continue crossings, then integrated with a 101-node
/// Gauss-Legendre rule per panel; a 203-node re-evaluation differing by more
/// than 1e-8 raises an accuracy error.
SequentialValue sequential_value(const PriorSpec& prior, const Weights& weights);

} // namespace discovery
