#include "discovery/oracle.hpp"

#include "discovery/gaussian.hpp"
#include "discovery/proposal.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <stdexcept>
#include <thread>
#include <vector>

namespace discovery {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
    x ^= x >> 30;
    x *= 0xBF58476D1CE4E5B9ULL;
    x ^= x >> 27;
    x *= 0x94D049BB133111EBULL;
    x ^= x >> 31;
    return x;
}

constexpr std::uint64_t kBatch = 1ull << 16;

unsigned thread_count() {
    if (const char* env = std::getenv("DISCOVERY_THREADS")) {
        const long v = std::strtol(env, nullptr, 10);
        if (v >= 1 && v <= 256) return static_cast<unsigned>(v);
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : hw;
}

struct BatchAccum {
    std::vector<double> sum;
    std::vector<double> sumsq;
};

// Affine belief maps in the discovered (or effective) value, derived from
// conditional_posterior so the oracle shares the verified formula path.
struct AffineBeliefs {
    std::vector<double> intercept;
    std::vector<double> slope;
};

AffineBeliefs affine_beliefs(const PriorSpec& prior, std::size_t observed) {
    const PosteriorBelief at0 = conditional_posterior(prior, observed, prior.means[observed]);
    const PosteriorBelief at1 =
        conditional_posterior(prior, observed, prior.means[observed] + 1.0);
    AffineBeliefs out;
    out.intercept.resize(prior.n());
    out.slope.resize(prior.n());
    for (std::size_t k = 0; k < prior.n(); ++k) {
        out.slope[k] = at1.means[k] - at0.means[k];
        out.intercept[k] = at0.means[k] - out.slope[k] * prior.means[observed];
    }
    return out;
}

} // namespace

double CounterRng::u01(std::uint64_t k) const {
    const std::uint64_t x = splitmix64(seed_ + (k + 1) * 0x9E3779B97F4A7C15ULL);
    return (static_cast<double>(x >> 11) + 0.5) * 0x1.0p-53;
}

double CounterRng::normal(std::uint64_t k) const { return std_normal_quantile(u01(k)); }

std::vector<std::vector<McEstimate>> mc_utility_table(
    const PriorSpec& prior, const Weights& weights, const std::vector<DiscoveryRule>& rules,
    const std::vector<McObjective>& objectives, std::uint64_t n_samples, std::uint64_t seed) {
    prior.validate();
    weights.validate();
    if (rules.empty()) throw std::invalid_argument("rule set must be nonempty");
    if (objectives.empty()) throw std::invalid_argument("objective set must be nonempty");
    if (n_samples < 10000) throw std::invalid_argument("mc requires at least 1e4 samples");
    const std::size_t n = prior.n();
    if (weights.n() != n) throw std::invalid_argument("weights length mismatch");

    // Per-rule precomputation; also validates rule/prior combinations.
    struct RulePlan {
        RuleKind kind;
        std::size_t project = 0;
        double shrink = 0.0; // posterior-mean shrinkage for noisy signals
        double tau = 0.0;
        AffineBeliefs beliefs;
    };
    std::vector<RulePlan> plans;
    for (const DiscoveryRule& rule : rules) {
        RulePlan plan;
        plan.kind = rule.kind;
        plan.project = rule.project;
        switch (rule.kind) {
            case RuleKind::NoDiscovery:
            case RuleKind::Both:
                break;
            case RuleKind::One:
                if (rule.project >= n) throw std::invalid_argument("project out of range");
                plan.beliefs = affine_beliefs(prior, rule.project);
                break;
            case RuleKind::Noisy: {
                if (rule.project >= n) throw std::invalid_argument("project out of range");
                if (!(rule.tau > 0.0)) throw std::invalid_argument("noisy tau must be > 0");
                const double si = prior.sds[rule.project];
                plan.tau = rule.tau;
                plan.shrink = si * si / (si * si + rule.tau * rule.tau);
                plan.beliefs = affine_beliefs(prior, rule.project);
                break;
            }
            case RuleKind::Sequential:
                throw std::invalid_argument("mc_utility does not simulate sequential policies");
        }
        plans.push_back(std::move(plan));
    }

    const double sqrt_rho = std::sqrt(prior.rho);
    const double sqrt_idio = std::sqrt(1.0 - prior.rho);
    const std::uint64_t stride = n + 2; // common factor, idiosyncratics, signal noise
    const CounterRng rng(seed);

    const std::uint64_t n_batches = (n_samples + kBatch - 1) / kBatch;
    std::vector<BatchAccum> batch_results(n_batches);

    const std::size_t n_cells = rules.size() * objectives.size();
    auto run_batch = [&](std::uint64_t b) {
        BatchAccum acc;
        acc.sum.assign(n_cells, 0.0);
        acc.sumsq.assign(n_cells, 0.0);
        std::vector<double> values(n), beliefs(n);
        const std::uint64_t lo = b * kBatch;
        const std::uint64_t hi = std::min(n_samples, lo + kBatch);
        for (std::uint64_t k = lo; k < hi; ++k) {
            const std::uint64_t base = k * stride;
            const double z0 = rng.normal(base);
            for (std::size_t p = 0; p < n; ++p) {
                const double zp = rng.normal(base + 1 + p);
                values[p] = prior.means[p] + prior.sds[p] * (sqrt_rho * z0 + sqrt_idio * zp);
            }
            for (std::size_t r = 0; r < plans.size(); ++r) {
                const RulePlan& plan = plans[r];
                switch (plan.kind) {
                    case RuleKind::NoDiscovery:
                        std::copy(prior.means.begin(), prior.means.end(), beliefs.begin());
                        break;
                    case RuleKind::Both:
                        std::copy(values.begin(), values.end(), beliefs.begin());
                        break;
                    case RuleKind::One: {
                        const double v = values[plan.project];
                        for (std::size_t p = 0; p < n; ++p) {
                            beliefs[p] = plan.beliefs.intercept[p] + plan.beliefs.slope[p] * v;
                        }
                        break;
                    }
                    case RuleKind::Noisy: {
                        const double zs = rng.normal(base + 1 + n);
                        const double s = values[plan.project] + plan.tau * zs;
                        const double q = prior.means[plan.project] +
                                         plan.shrink * (s - prior.means[plan.project]);
                        for (std::size_t p = 0; p < n; ++p) {
                            beliefs[p] = plan.beliefs.intercept[p] + plan.beliefs.slope[p] * q;
                        }
                        break;
                    }
                    case RuleKind::Sequential:
                        break;
                }
                for (std::size_t o = 0; o < objectives.size(); ++o) {
                    double value = 0.0;
                    switch (objectives[o]) {
                        case McObjective::WeightedUtility:
                            value = best_proposal_payoff(beliefs, weights.w);
                            break;
                        case McObjective::GrandBundle: {
                            double sum = 0.0;
                            for (double m : beliefs) sum += m;
                            value = sum >= 0.0 ? 1.0 : 0.0;
                            break;
                        }
                        case McObjective::AtLeastOne: {
                            double mx = beliefs[0];
                            for (double m : beliefs) mx = std::max(mx, m);
                            value = mx >= 0.0 ? 1.0 : 0.0;
                            break;
                        }
                    }
                    const std::size_t cell = o * rules.size() + r;
                    acc.sum[cell] += value;
                    acc.sumsq[cell] += value * value;
                }
            }
        }
        batch_results[b] = std::move(acc);
    };

    const unsigned workers = std::min<std::uint64_t>(thread_count(), n_batches);
    if (workers <= 1) {
        for (std::uint64_t b = 0; b < n_batches; ++b) run_batch(b);
    } else {
        std::atomic<std::uint64_t> next{0};
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (unsigned t = 0; t < workers; ++t) {
            pool.emplace_back([&]() {
                for (std::uint64_t b = next.fetch_add(1); b < n_batches;
                     b = next.fetch_add(1)) {
                    run_batch(b);
                }
            });
        }
        for (std::thread& t : pool) t.join();
    }

    std::vector<std::vector<McEstimate>> out(objectives.size(),
                                             std::vector<McEstimate>(rules.size()));
    for (std::size_t o = 0; o < objectives.size(); ++o) {
        for (std::size_t r = 0; r < rules.size(); ++r) {
            const std::size_t cell = o * rules.size() + r;
            double sum = 0.0, sumsq = 0.0;
            for (const BatchAccum& acc : batch_results) { // fixed merge order
                sum += acc.sum[cell];
                sumsq += acc.sumsq[cell];
            }
            const double nn = static_cast<double>(n_samples);
            const double mean = sum / nn;
            const double var = std::max(0.0, (sumsq - nn * mean * mean) / (nn - 1.0));
            out[o][r] = {mean, std::sqrt(var / nn), n_samples, seed};
        }
    }
    return out;
}

std::vector<McEstimate> mc_utility_multi(const PriorSpec& prior, const Weights& weights,
                                         const std::vector<DiscoveryRule>& rules,
                                         std::uint64_t n_samples, std::uint64_t seed,
                                         McObjective objective) {
    return mc_utility_table(prior, weights, rules, {objective}, n_samples, seed)[0];
}

McEstimate mc_utility(const PriorSpec& prior, const Weights& weights, const DiscoveryRule& rule,
                      std::uint64_t n_samples, std::uint64_t seed, McObjective objective) {
    if (rule.kind == RuleKind::NoDiscovery && objective == McObjective::WeightedUtility) {
        // Beliefs never move, so the payoff is the deterministic constant.
        double u = best_proposal(prior.means, weights).payoff;
        return {u, 0.0, n_samples, seed};
    }
    return mc_utility_multi(prior, weights, {rule}, n_samples, seed, objective)[0];
}

namespace {

ConditionalCheck regress(const std::vector<double>& xs, const std::vector<double>& ys) {
    const double n = static_cast<double>(xs.size());
    double sx = 0.0, sy = 0.0;
    for (std::size_t k = 0; k < xs.size(); ++k) {
        sx += xs[k];
        sy += ys[k];
    }
    const double mx = sx / n, my = sy / n;
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t k = 0; k < xs.size(); ++k) {
        sxx += (xs[k] - mx) * (xs[k] - mx);
        sxy += (xs[k] - mx) * (ys[k] - my);
    }
    ConditionalCheck out;
    out.n_samples = xs.size();
    out.slope = sxy / sxx;
    out.intercept = my - out.slope * mx;
    double ssr = 0.0;
    for (std::size_t k = 0; k < xs.size(); ++k) {
        const double resid = ys[k] - out.intercept - out.slope * xs[k];
        ssr += resid * resid;
    }
    out.residual_var = ssr / (n - 2.0);
    out.slope_se = std::sqrt(out.residual_var / sxx);
    out.intercept_se = std::sqrt(out.residual_var * (1.0 / n + mx * mx / sxx));
    out.residual_var_se = out.residual_var * std::sqrt(2.0 / (n - 2.0));
    return out;
}

} // namespace

ConditionalCheck mc_conditional_check(const PriorSpec& prior, std::size_t i, std::size_t j,
                                      std::uint64_t n_samples, std::uint64_t seed) {
    prior.validate();
    if (i >= prior.n() || j >= prior.n() || i == j) {
        throw std::invalid_argument("conditional check needs distinct in-range projects");
    }
    if (n_samples < 100000) throw std::invalid_argument("conditional check needs >= 1e5 samples");

    const CounterRng rng(seed);
    const double sqrt_rho = std::sqrt(prior.rho);
    const double sqrt_idio = std::sqrt(1.0 - prior.rho);
    const std::uint64_t stride = prior.n() + 2;
    std::vector<double> xs(n_samples), ys(n_samples);
    for (std::uint64_t k = 0; k < n_samples; ++k) {
        const std::uint64_t base = k * stride;
        const double z0 = rng.normal(base);
        const double zi = rng.normal(base + 1 + i);
        const double zj = rng.normal(base + 1 + j);
        xs[k] = prior.means[i] + prior.sds[i] * (sqrt_rho * z0 + sqrt_idio * zi);
        ys[k] = prior.means[j] + prior.sds[j] * (sqrt_rho * z0 + sqrt_idio * zj);
    }
    return regress(xs, ys);
}

NoisyConditionalCheck mc_noisy_conditional_check(const PriorSpec& prior, std::size_t i,
                                                 double tau, std::uint64_t n_samples,
                                                 std::uint64_t seed) {
    prior.validate();
    if (i >= prior.n()) throw std::invalid_argument("project index out of range");
    if (!(tau > 0.0)) throw std::invalid_argument("tau must be > 0");
    if (n_samples < 100000) throw std::invalid_argument("conditional check needs >= 1e5 samples");
    const std::size_t j = (i == 0) ? 1 : 0;

    const CounterRng rng(seed);
    const double sqrt_rho = std::sqrt(prior.rho);
    const double sqrt_idio = std::sqrt(1.0 - prior.rho);
    const double si = prior.sds[i];
    const double shrink = si * si / (si * si + tau * tau);
    const std::uint64_t stride = prior.n() + 2;

    std::vector<double> signals(n_samples), vjs(n_samples), qs(n_samples);
    for (std::uint64_t k = 0; k < n_samples; ++k) {
        const std::uint64_t base = k * stride;
        const double z0 = rng.normal(base);
        const double zi = rng.normal(base + 1 + i);
        const double zj = rng.normal(base + 1 + j);
        const double zs = rng.normal(base + 1 + prior.n());
        const double vi = prior.means[i] + si * (sqrt_rho * z0 + sqrt_idio * zi);
        vjs[k] = prior.means[j] + prior.sds[j] * (sqrt_rho * z0 + sqrt_idio * zj);
        signals[k] = vi + tau * zs;
        qs[k] = prior.means[i] + shrink * (signals[k] - prior.means[i]);
    }

    NoisyConditionalCheck out;
    out.n_samples = n_samples;
    double sq = 0.0;
    for (double q : qs) sq += q;
    const double mq = sq / static_cast<double>(n_samples);
    double ssq = 0.0;
    for (double q : qs) ssq += (q - mq) * (q - mq);
    out.post_mean_var = ssq / static_cast<double>(n_samples - 1);
    out.post_mean_var_se = out.post_mean_var * std::sqrt(2.0 / static_cast<double>(n_samples - 1));
    out.vj_on_signal = regress(signals, vjs);
    return out;
}

} // namespace discovery
