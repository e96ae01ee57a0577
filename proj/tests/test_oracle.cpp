#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "discovery/oracle.hpp"
#include "discovery/payoffs.hpp"

#include <cmath>

using namespace discovery;

namespace {
const PriorSpec kPrior{{-0.5, 0.2}, {0.5, 0.4}, 0.25};
const Weights kHalf{{0.5, 0.5}};
}

TEST_CASE("counter rng: uniforms live strictly inside (0,1) and are stateless") {
    const CounterRng a(9), b(9), c(10);
    for (std::uint64_t k = 0; k < 2000; ++k) {
        const double u = a.u01(k);
        CHECK(u > 0.0);
        CHECK(u < 1.0);
        CHECK(u == b.u01(k));
    }
    int diff = 0;
    for (std::uint64_t k = 0; k < 100; ++k) diff += a.u01(k) != c.u01(k);
    CHECK(diff == 100);
}

TEST_CASE("identical seed and parameters give bit-identical estimates") {
    const auto e1 = mc_utility(kPrior, kHalf, DiscoveryRule::one(0), 100000, 4242);
    const auto e2 = mc_utility(kPrior, kHalf, DiscoveryRule::one(0), 100000, 4242);
    CHECK(e1.mean == e2.mean);
    CHECK(e1.std_error == e2.std_error);
    const auto e3 = mc_utility(kPrior, kHalf, DiscoveryRule::one(0), 100000, 4243);
    CHECK(e1.mean != e3.mean);
}

TEST_CASE("multi-rule and tabled passes match the single-rule estimates bitwise") {
    const std::vector<DiscoveryRule> rules = {DiscoveryRule::one(0), DiscoveryRule::one(1),
                                              DiscoveryRule::both()};
    const auto multi = mc_utility_multi(kPrior, kHalf, rules, 50000, 77);
    for (std::size_t r = 0; r < rules.size(); ++r) {
        const auto single = mc_utility(kPrior, kHalf, rules[r], 50000, 77);
        CHECK(single.mean == multi[r].mean);
        CHECK(single.std_error == multi[r].std_error);
    }
    const auto table = mc_utility_table(
        kPrior, kHalf, rules, {McObjective::GrandBundle, McObjective::WeightedUtility}, 50000,
        77);
    CHECK(table[1][0].mean == multi[0].mean);
    const auto gb = mc_utility(kPrior, kHalf, rules[2], 50000, 77, McObjective::GrandBundle);
    CHECK(table[0][2].mean == gb.mean);
}

TEST_CASE("no-discovery estimate is the deterministic constant with zero SE") {
    const auto est = mc_utility(kPrior, kHalf, DiscoveryRule::none(), 100000, 5);
    CHECK(est.mean == utility_no_discovery(kPrior, kHalf));
    CHECK(est.std_error == 0.0);
}

TEST_CASE("standard error scales as 1/sqrt(n)") {
    const auto small = mc_utility(kPrior, kHalf, DiscoveryRule::one(0), 100000, 31);
    const auto large = mc_utility(kPrior, kHalf, DiscoveryRule::one(0), 400000, 31);
    const double ratio = small.std_error / large.std_error;
    CHECK(ratio > 1.7);
    CHECK(ratio < 2.3);
}

TEST_CASE("orthant example: both-discovery utility at the independent prior") {
    const PriorSpec indep{{0.0, 0.0}, {1.0, 1.0}, 0.0};
    const auto est = mc_utility(indep, kHalf, DiscoveryRule::both(), 1000000, 99);
    CHECK(std::fabs(est.mean - 0.625) <= 4.0 * est.std_error);
}

TEST_CASE("closed-form utilities sit within 4 SE of the oracle") {
    const auto one0 = mc_utility(kPrior, kHalf, DiscoveryRule::one(0), 400000, 2121);
    CHECK(std::fabs(one0.mean - utility_discover_one(kPrior, kHalf, 0)) <=
          4.0 * one0.std_error);
    const auto both = mc_utility(kPrior, kHalf, DiscoveryRule::both(), 400000, 2122);
    CHECK(std::fabs(both.mean - utility_discover_both(kPrior, kHalf)) <= 4.0 * both.std_error);
}

TEST_CASE("conditional regression oracle") {
    SUBCASE("rho = 0 gives slope 0") {
        const PriorSpec indep{{0.0, 0.0}, {1.0, 2.0}, 0.0};
        const auto chk = mc_conditional_check(indep, 0, 1, 200000, 13);
        CHECK(std::fabs(chk.slope) <= 4.0 * chk.slope_se);
    }
    SUBCASE("rho = 0.5, sds (1,2): slope 1, residual variance 3") {
        const PriorSpec prior{{0.0, 0.0}, {1.0, 2.0}, 0.5};
        const auto chk = mc_conditional_check(prior, 0, 1, 400000, 14);
        CHECK(std::fabs(chk.slope - 1.0) <= 4.0 * chk.slope_se);
        CHECK(std::fabs(chk.residual_var - 3.0) <= 4.0 * chk.residual_var_se);
    }
}

TEST_CASE("rule/prior combinations that cannot be simulated are rejected") {
    CHECK_THROWS_AS(mc_utility(kPrior, kHalf, DiscoveryRule::sequential(), 100000, 1),
                    std::invalid_argument);
    CHECK_THROWS_AS(mc_utility(kPrior, kHalf, DiscoveryRule::one(5), 100000, 1),
                    std::invalid_argument);
    CHECK_THROWS_AS(mc_utility(kPrior, kHalf, DiscoveryRule::one(0), 100, 1),
                    std::invalid_argument);
}
