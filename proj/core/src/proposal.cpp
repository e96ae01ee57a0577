#include "discovery/proposal.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <stdexcept>

namespace discovery {

namespace {
constexpr std::size_t kMaxProjects = 16;
}

void Weights::validate() const {
    if (w.empty()) throw std::invalid_argument("weights must be nonempty");
    double sum = 0.0;
    for (double wi : w) {
        if (!(wi >= 0.0) || !std::isfinite(wi)) {
            throw std::invalid_argument("weights must be nonnegative and finite");
        }
        sum += wi;
    }
    if (std::fabs(sum - 1.0) > 1e-12) {
        throw std::invalid_argument("weights must sum to 1 within 1e-12");
    }
}

Proposal best_proposal(std::span<const double> posterior_means, const Weights& weights) {
    weights.validate();
    const std::size_t n = posterior_means.size();
    if (n != weights.n()) {
        throw std::invalid_argument("posterior_means and weights length mismatch");
    }
    if (n > kMaxProjects) {
        throw std::invalid_argument("best_proposal supports at most 16 projects");
    }

    std::uint32_t best_mask = 0; // empty proposal: payoff 0, always feasible
    double best_payoff = 0.0;
    for (std::uint32_t mask = 1; mask < (1u << n); ++mask) {
        double sum = 0.0, payoff = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            if (mask & (1u << i)) {
                sum += posterior_means[i];
                payoff += weights.w[i];
            }
        }
        if (sum < 0.0) continue;
        const int pc = std::popcount(mask);
        const int bpc = std::popcount(best_mask);
        const bool better =
            payoff > best_payoff ||
            (payoff == best_payoff && (pc < bpc || (pc == bpc && mask < best_mask)));
        if (better) {
            best_payoff = payoff;
            best_mask = mask;
        }
    }

    Proposal out;
    out.payoff = best_payoff;
    for (std::size_t i = 0; i < n; ++i) {
        if (best_mask & (1u << i)) out.subset.push_back(i);
    }
    return out;
}

double best_proposal_payoff(std::span<const double> posterior_means,
                            std::span<const double> weights) {
    const std::size_t n = posterior_means.size();
    double best = 0.0;
    for (std::uint32_t mask = 1; mask < (1u << n); ++mask) {
        double sum = 0.0, payoff = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            if (mask & (1u << i)) {
                sum += posterior_means[i];
                payoff += weights[i];
            }
        }
        if (sum >= 0.0 && payoff > best) best = payoff;
    }
    return best;
}

double StepFunction::operator()(double v) const {
    const auto it = std::upper_bound(thresholds.begin(), thresholds.end(), v);
    return levels[static_cast<std::size_t>(it - thresholds.begin())];
}

StepFunction approval_breakpoints(const PriorSpec& prior, const Weights& weights,
                                  std::size_t discovered) {
    prior.validate();
    weights.validate();
    const std::size_t n = prior.n();
    if (discovered >= n) throw std::invalid_argument("discovered index out of range");
    if (weights.n() != n) throw std::invalid_argument("weights length mismatch");
    if (!(prior.rho > 0.0)) {
        throw std::domain_error("approval_breakpoints requires rho > 0 (monotone beliefs)");
    }
    if (n > kMaxProjects) {
        throw std::invalid_argument("approval_breakpoints supports at most 16 projects");
    }

    // belief_k(v) = icpt_k + slope_k * v, slopes all positive.
    std::vector<double> icpt(n), slope(n);
    for (std::size_t k = 0; k < n; ++k) {
        if (k == discovered) {
            icpt[k] = 0.0;
            slope[k] = 1.0;
        } else {
            const double s = prior.rho * prior.sds[k] / prior.sds[discovered];
            icpt[k] = prior.means[k] - s * prior.means[discovered];
            slope[k] = s;
        }
    }

    std::vector<std::pair<double, double>> cuts; // (threshold, subset weight)
    cuts.reserve((1u << n) - 1);
    for (std::uint32_t mask = 1; mask < (1u << n); ++mask) {
        double a = 0.0, b = 0.0, payoff = 0.0;
        for (std::size_t k = 0; k < n; ++k) {
            if (mask & (1u << k)) {
                a += icpt[k];
                b += slope[k];
                payoff += weights.w[k];
            }
        }
        cuts.emplace_back(-a / b, payoff);
    }
    std::sort(cuts.begin(), cuts.end());

    StepFunction out;
    out.levels.push_back(0.0);
    double running = 0.0;
    for (const auto& [t, payoff] : cuts) {
        if (payoff <= running) continue;
        running = payoff;
        if (!out.thresholds.empty() && t == out.thresholds.back()) {
            out.levels.back() = running;
        } else {
            out.thresholds.push_back(t);
            out.levels.push_back(running);
        }
    }
    return out;
}

} // namespace discovery
