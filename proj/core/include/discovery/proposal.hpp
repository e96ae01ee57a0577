#pragma once

#include "discovery/gaussian.hpp"

#include <cstdint>
#include <span>
#include <vector>

namespace discovery {

/// Principal's project weights: nonnegative, summing to 1.
struct Weights {
    std::vector<double> w;

    std::size_t n() const { return w.size(); }
    void validate() const;
};

struct Proposal {
    std::vector<std::size_t> subset; // sorted indices; empty means "propose nothing"
    double payoff = 0.0;
};

/// Best approvable proposal given posterior mean beliefs: maximizes total
/// weight over subsets whose mean-sum is >= 0 (the empty set is always
/// feasible). Exhaustive over 2^n subsets, n <= 16. Ties go to the smaller
/// cardinality, then to the lexicographically smallest bitmask, so results
/// are reproducible.
Proposal best_proposal(std::span<const double> posterior_means, const Weights& weights);

/// Payoff of best_proposal without materializing the subset; no validation,
/// no allocation. The Monte Carlo hot loop lives on this.
double best_proposal_payoff(std::span<const double> posterior_means,
                            std::span<const double> weights);

/// Nondecreasing right-continuous step function: value is levels[k] on
/// [thresholds[k-1], thresholds[k}), with levels.size() == thresholds.size()+1.
struct StepFunction {
    std::vector<double> thresholds;
    std::vector<double> levels;

    double operator()(double v) const;
};

/// The best-proposal payoff as a function of the discovered project's value.
/// Every posterior mean is affine and increasing in that value (rho > 0), so
/// each subset has a single approval threshold and the payoff is a
/// nondecreasing step function starting at 0.
StepFunction approval_breakpoints(const PriorSpec& prior, const Weights& weights,
                                  std::size_t discovered);

} // namespace discovery
