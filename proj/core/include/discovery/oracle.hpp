#pragma once

#include "discovery/payoffs.hpp"

#include <cstdint>

namespace discovery {

/// Counter-based generator (SplitMix64 over an explicit counter), so sample k
/// is a pure function of (seed, k) and parallel batches reproduce exactly.
class CounterRng {
public:
    explicit CounterRng(std::uint64_t seed) : seed_(seed) {}

    /// Uniform draw strictly inside (0, 1) at counter position k.
    double u01(std::uint64_t k) const;

    /// Standard normal via inverse transform through std_normal_quantile.
    double normal(std::uint64_t k) const;

    std::uint64_t seed() const { return seed_; }

private:
    std::uint64_t seed_;
};

struct McEstimate {
    double mean = 0.0;
    double std_error = 0.0;
    std::uint64_t n_samples = 0;
    std::uint64_t seed = 0;
};

enum class McObjective { WeightedUtility, GrandBundle, AtLeastOne };

/// Simulates the game literally: draw the value vector through the
/// common-factor construction (v_i = mu_i + sd_i*(sqrt(rho)*z0 +
/// sqrt(1-rho)*z_i)), apply the discovery rule, form posterior mean beliefs,
/// run best_proposal, and average the chosen objective. Batches of 2^16
/// samples merge in fixed order, so results are bit-identical for any thread
/// count. Thread count comes from DISCOVERY_THREADS, else the hardware.
McEstimate mc_utility(const PriorSpec& prior, const Weights& weights,
                      const DiscoveryRule& rule, std::uint64_t n_samples, std::uint64_t seed,
                      McObjective objective = McObjective::WeightedUtility);

/// One pass over a shared sample stream evaluating several rules at once.
/// Entry r is bit-identical to mc_utility(prior, weights, rules[r], ...).
std::vector<McEstimate> mc_utility_multi(const PriorSpec& prior, const Weights& weights,
                                         const std::vector<DiscoveryRule>& rules,
                                         std::uint64_t n_samples, std::uint64_t seed,
                                         McObjective objective = McObjective::WeightedUtility);

/// Rules x objectives from one pass; entry [o][r] is bit-identical to
/// mc_utility(prior, weights, rules[r], n, seed, objectives[o]).
std::vector<std::vector<McEstimate>> mc_utility_table(
    const PriorSpec& prior, const Weights& weights, const std::vector<DiscoveryRule>& rules,
    const std::vector<McObjective>& objectives, std::uint64_t n_samples, std::uint64_t seed);

struct ConditionalCheck {
    double slope = 0.0, slope_se = 0.0;
    double intercept = 0.0, intercept_se = 0.0;
    double residual_var = 0.0, residual_var_se = 0.0;
    std::uint64_t n_samples = 0;
};

/// Regression of v_j on v_i over seeded samples; validates the conditional
/// posterior's slope rho*sd_j/sd_i and residual variance (1-rho^2)*sd_j^2.
ConditionalCheck mc_conditional_check(const PriorSpec& prior, std::size_t i, std::size_t j,
                                      std::uint64_t n_samples, std::uint64_t seed);

struct NoisyConditionalCheck {
    double post_mean_var = 0.0, post_mean_var_se = 0.0; // sample variance of q_i
    ConditionalCheck vj_on_signal;                      // regression of v_j on s_i
    std::uint64_t n_samples = 0;
};

/// Two-stage sampling (draw v, then s_i = v_i + tau*z): the posterior-mean
/// variance should match sd_i^4/(tau^2+sd_i^2) and the regression of v_j on
/// s_i exposes the joint-normal slope and residual variance directly.
NoisyConditionalCheck mc_noisy_conditional_check(const PriorSpec& prior, std::size_t i,
                                                 double tau, std::uint64_t n_samples,
                                                 std::uint64_t seed);

} // namespace discovery
