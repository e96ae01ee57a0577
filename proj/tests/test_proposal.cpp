#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "discovery/oracle.hpp"
#include "discovery/proposal.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

using namespace discovery;

TEST_CASE("weights validation") {
    CHECK_NOTHROW((Weights{{0.5, 0.5}}).validate());
    CHECK_NOTHROW((Weights{{1.0, 0.0}}).validate());
    CHECK_THROWS_AS((Weights{{0.6, 0.6}}).validate(), std::invalid_argument);
    CHECK_THROWS_AS((Weights{{-0.1, 1.1}}).validate(), std::invalid_argument);
}

TEST_CASE("best proposal picks the heaviest approvable subset") {
    const Weights half{{0.5, 0.5}};
    SUBCASE("grand bundle clears zero") {
        const std::vector<double> means = {-1.0, 2.0};
        const Proposal p = best_proposal(means, half);
        CHECK(p.subset == std::vector<std::size_t>{0, 1});
        CHECK(p.payoff == 1.0);
    }
    SUBCASE("bundle fails, single survives") {
        const std::vector<double> means = {-3.0, 2.0};
        const Proposal p = best_proposal(means, half);
        CHECK(p.subset == std::vector<std::size_t>{1});
        CHECK(p.payoff == 0.5);
    }
    SUBCASE("nothing approvable") {
        const std::vector<double> means = {-1.0, -2.0};
        const Proposal p = best_proposal(means, half);
        CHECK(p.subset.empty());
        CHECK(p.payoff == 0.0);
    }
    SUBCASE("approval at exactly zero") {
        const std::vector<double> means = {1.0, -1.0};
        CHECK(best_proposal(means, half).payoff == 1.0);
    }
    SUBCASE("payoff ties break to smaller cardinality then lexicographic") {
        // both singles and the pair are approvable; pair weight 1 wins;
        // with a zero-weight project the tie goes to the smaller subset
        const Weights skew{{1.0, 0.0}};
        const std::vector<double> means = {2.0, 5.0};
        const Proposal p = best_proposal(means, skew);
        CHECK(p.subset == std::vector<std::size_t>{0});
        const std::vector<double> neg = {-1.0, 5.0};
        CHECK(best_proposal(neg, skew).subset == std::vector<std::size_t>{0, 1});
    }
    SUBCASE("zero-weight approvable subsets lose to the empty proposal") {
        const Weights skew{{1.0, 0.0}};
        const std::vector<double> means = {-5.0, 3.0}; // pair sum stays negative
        const Proposal p = best_proposal(means, skew);
        CHECK(p.subset.empty());
        CHECK(p.payoff == 0.0);
    }
    SUBCASE("length mismatch") {
        const std::vector<double> means = {0.0};
        CHECK_THROWS_AS(best_proposal(means, half), std::invalid_argument);
    }
}

TEST_CASE("best proposal properties over random draws") {
    const CounterRng rng(424242);
    for (int draw = 0; draw < 2000; ++draw) {
        const std::uint64_t base = 32ull * draw;
        const std::size_t n = 2 + static_cast<std::size_t>(rng.u01(base) * 3.0);
        std::vector<double> means(n), w(n);
        double wsum = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            means[i] = 4.0 * rng.u01(base + 1 + i) - 2.0;
            w[i] = 0.05 + rng.u01(base + 9 + i);
            wsum += w[i];
        }
        for (double& x : w) x /= wsum;
        const Weights weights{w};
        const Proposal p = best_proposal(means, weights);

        // payoff within [0,1]; chosen subset approvable
        CHECK(p.payoff >= 0.0);
        CHECK(p.payoff <= 1.0 + 1e-12);
        double sum = 0.0;
        for (std::size_t i : p.subset) sum += means[i];
        CHECK((p.subset.empty() || sum >= 0.0));

        // monotonicity: raising one mean never lowers the payoff
        std::vector<double> raised = means;
        const std::size_t bump = static_cast<std::size_t>(rng.u01(base + 20) * n);
        raised[bump] += 1.0 + rng.u01(base + 21);
        CHECK(best_proposal(raised, weights).payoff >= p.payoff - 1e-15);

        // relabeling equivariance: reverse the projects
        std::vector<double> rmeans(means.rbegin(), means.rend());
        std::vector<double> rw(w.rbegin(), w.rend());
        const Proposal rp = best_proposal(rmeans, Weights{rw});
        CHECK(rp.payoff == doctest::Approx(p.payoff).epsilon(1e-15));
        std::vector<std::size_t> mirrored;
        for (std::size_t i : rp.subset) mirrored.push_back(n - 1 - i);
        std::sort(mirrored.begin(), mirrored.end());
        CHECK(mirrored == p.subset);

        CHECK(best_proposal_payoff(means, w) == p.payoff);
    }
}

TEST_CASE("approval breakpoints (two projects, hand algebra)") {
    // beliefs after discovering project 1: b2(v) = 0.5 + 0.5 (v + 1) = 1 + v/2
    // thresholds: {2} at v = -2, {1,2} at 1.5 v + 1 = 0 -> v = -2/3, {1} at 0
    const PriorSpec prior{{-1.0, 0.5}, {1.0, 1.0}, 0.5};
    const Weights half{{0.5, 0.5}};
    const StepFunction step = approval_breakpoints(prior, half, 0);
    REQUIRE(step.thresholds.size() == 2);
    CHECK(step.thresholds[0] == doctest::Approx(-2.0).epsilon(1e-14));
    CHECK(step.thresholds[1] == doctest::Approx(-2.0 / 3.0).epsilon(1e-14));
    CHECK(step.levels == std::vector<double>{0.0, 0.5, 1.0});
    CHECK(step(-3.0) == 0.0);
    CHECK(step(-1.0) == 0.5);
    CHECK(step(0.0) == 1.0);
}

TEST_CASE("approval breakpoints: every subset approvable everywhere relevant") {
    const PriorSpec prior{{50.0, 60.0}, {1.0, 1.0}, 0.5};
    const Weights half{{0.5, 0.5}};
    const StepFunction step = approval_breakpoints(prior, half, 0);
    for (double v = 40.0; v <= 60.0; v += 2.0) CHECK(step(v) == 1.0);
}

TEST_CASE("approval breakpoints agree with a dense best-proposal scan") {
    const CounterRng rng(777);
    for (int inst = 0; inst < 12; ++inst) {
        const std::uint64_t base = 32ull * inst;
        const std::size_t n = 2 + static_cast<std::size_t>(rng.u01(base) * 2.0);
        std::vector<double> means(n), sds(n), w(n);
        double wsum = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            means[i] = 3.0 * rng.u01(base + 1 + i) - 1.5;
            sds[i] = 0.2 + 1.8 * rng.u01(base + 9 + i);
            w[i] = 0.1 + rng.u01(base + 17 + i);
            wsum += w[i];
        }
        for (double& x : w) x /= wsum;
        const PriorSpec prior{means, sds, 0.1 + 0.85 * rng.u01(base + 30)};
        const Weights weights{w};
        const std::size_t discovered = static_cast<std::size_t>(rng.u01(base + 31) * n);
        const StepFunction step = approval_breakpoints(prior, weights, discovered);

        // nondecreasing levels starting at zero
        CHECK(step.levels.front() == 0.0);
        for (std::size_t k = 1; k < step.levels.size(); ++k) {
            CHECK(step.levels[k] > step.levels[k - 1]);
        }

        std::vector<double> beliefs(n);
        for (int s = 0; s < 10000; ++s) {
            const double v = means[discovered] + sds[discovered] * (16.0 * rng.u01(base + 40 + s) - 8.0);
            const PosteriorBelief post = conditional_posterior(prior, discovered, v);
            const double payoff = best_proposal(post.means, weights).payoff;
            CHECK(step(v) == doctest::Approx(payoff).epsilon(1e-12));
        }
    }
}

TEST_CASE("approval breakpoints reject rho <= 0") {
    const PriorSpec prior{{0.0, 0.0}, {1.0, 1.0}, 0.0};
    CHECK_THROWS_AS(approval_breakpoints(prior, Weights{{0.5, 0.5}}, 0), std::domain_error);
}
