#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "discovery/cutoffs.hpp"
#include "discovery/oracle.hpp"
#include "discovery/payoffs.hpp"
#include "discovery/quadrature.hpp"

#include <cmath>
#include <vector>

using namespace discovery;

namespace {

const PriorSpec kFig{{-0.5, 0.2}, {0.05, 0.2}, 0.25};

// Iterated-quadrature oracle for independent projects: the inner expectation
// over v2 is a Phi sum per fixed v1, the outer integral splits at v1 = 0.
double independent_both_oracle(const PriorSpec& prior, const Weights& w) {
    auto inner = [&](double v1) {
        auto cdf2 = [&](double t) {
            return std_normal_cdf((t - prior.means[1]) / prior.sds[1]);
        };
        if (v1 >= 0.0) return w.w[0] * cdf2(-v1) + (1.0 - cdf2(-v1));
        return w.w[1] * (cdf2(-v1) - cdf2(0.0)) + (1.0 - cdf2(-v1));
    };
    auto f = [&](double v1) {
        return inner(v1) * std_normal_pdf((v1 - prior.means[0]) / prior.sds[0]) / prior.sds[0];
    };
    const double lo = prior.means[0] - 10.0 * prior.sds[0];
    const double hi = prior.means[0] + 10.0 * prior.sds[0];
    return integrate_adaptive(f, lo, 0.0, 5e-13) + integrate_adaptive(f, 0.0, hi, 5e-13);
}

} // namespace

TEST_CASE("no-discovery utility is the best proposal at the prior") {
    const Weights half{{0.5, 0.5}};
    CHECK(utility_no_discovery(PriorSpec{{-1.0, 0.5}, {1.0, 1.0}, 0.5}, half) == 0.5);
    CHECK(utility_no_discovery(PriorSpec{{0.2, 0.3}, {1.0, 1.0}, 0.5}, half) == 1.0);
    CHECK(utility_no_discovery(PriorSpec{{-1.0, -2.0}, {1.0, 1.0}, 0.5}, half) == 0.0);
}

TEST_CASE("discovery at c = c* is exactly indifferent when w = 1/2") {
    const double cs = c_star(0.05, 0.2, 0.25);
    for (double mu : {0.3, 1.0, 4.0}) {
        const PriorSpec prior{{-mu, cs * mu}, {0.05, 0.2}, 0.25};
        CHECK(utility_discover_one(prior, Weights{{0.5, 0.5}}, 0) ==
              doctest::Approx(0.5).epsilon(1e-13));
    }
}

TEST_CASE("closed forms match the breakpoint integrator to 1e-12") {
    const CounterRng rng(314159);
    for (int draw = 0; draw < 500; ++draw) {
        const std::uint64_t base = 8ull * draw;
        const double mu = 0.05 + 1.95 * rng.u01(base);
        const double c = 0.95 * rng.u01(base + 1);
        const double s1 = 0.05 + 1.95 * rng.u01(base + 2);
        const double s2 = 0.05 + 1.95 * rng.u01(base + 3);
        const double rho = 0.05 + 0.9 * rng.u01(base + 4);
        const double w1 = 0.1 + 0.8 * rng.u01(base + 5);
        const PriorSpec prior{{-mu, c * mu}, {s1, s2}, rho};
        const Weights w{{w1, 1.0 - w1}};
        for (std::size_t i = 0; i < 2; ++i) {
            const auto closed = single_discovery_closed_form(prior, w, i);
            REQUIRE(closed.has_value());
            CHECK(std::fabs(*closed - utility_discover_one(prior, w, i)) < 1e-12);
        }
    }
    // outside the sign pattern there is no closed form
    CHECK(!single_discovery_closed_form(PriorSpec{{-1.0, -0.5}, {1.0, 1.0}, 0.5},
                                        Weights{{0.5, 0.5}}, 0)
               .has_value());
}

TEST_CASE("Pi1 >= Pi2 whenever sigma1 >= sigma2 (trial-balloon dominance)") {
    const CounterRng rng(555);
    for (int draw = 0; draw < 2000; ++draw) {
        const std::uint64_t base = 8ull * draw;
        const double s2 = 0.05 + 1.5 * rng.u01(base);
        const double s1 = s2 + 1.5 * rng.u01(base + 1);
        const double mu = 0.05 + 2.0 * rng.u01(base + 2);
        const double c = 0.95 * rng.u01(base + 3);
        const double rho = 0.05 + 0.9 * rng.u01(base + 4);
        const double w1 = 0.1 + 0.8 * rng.u01(base + 5);
        const PriorSpec prior{{-mu, c * mu}, {s1, s2}, rho};
        const Weights w{{w1, 1.0 - w1}};
        CHECK(utility_discover_one(prior, w, 0) >= utility_discover_one(prior, w, 1) - 1e-13);
    }
}

TEST_CASE("utility of discovering both") {
    SUBCASE("independent symmetric example") {
        const PriorSpec prior{{0.0, 0.0}, {1.0, 1.0}, 0.0};
        CHECK(utility_discover_both(prior, Weights{{0.5, 0.5}}) ==
              doctest::Approx(0.625).epsilon(1e-12));
    }
    SUBCASE("both positive means still lose mass to the negative quadrant") {
        const PriorSpec prior{{0.4, 0.1}, {1.0, 1.0}, 0.3};
        CHECK(utility_discover_both(prior, Weights{{0.5, 0.5}}) < 1.0 - 1e-6);
    }
    SUBCASE("degenerate weight collapses to a union probability") {
        const PriorSpec prior{{-0.2, 0.3}, {0.8, 1.1}, 0.35};
        const double u = utility_discover_both(prior, Weights{{1.0, 0.0}});
        const double s = std::sqrt(0.8 * 0.8 + 1.1 * 1.1 + 2.0 * 0.35 * 0.8 * 1.1);
        const double r = (0.8 + 0.35 * 1.1) / s;
        const double p_v1neg_sumneg =
            bivariate_rect_prob(0.2 / 0.8, -(prior.means[0] + prior.means[1]) / s, r);
        CHECK(u == doctest::Approx(1.0 - p_v1neg_sumneg).epsilon(1e-11));
    }
    SUBCASE("rho -> 0 approaches the independent-projects quadrature oracle") {
        const PriorSpec prior{{-0.3, 0.25}, {0.9, 0.7}, 1e-9};
        const Weights w{{0.6, 0.4}};
        CHECK(utility_discover_both(prior, w) ==
              doctest::Approx(independent_both_oracle(prior, w)).epsilon(1e-9));
    }
    SUBCASE("relabeling invariance") {
        const PriorSpec prior{{-0.4, 0.6}, {1.3, 0.5}, 0.4};
        const PriorSpec swapped{{0.6, -0.4}, {0.5, 1.3}, 0.4};
        CHECK(utility_discover_both(prior, Weights{{0.7, 0.3}}) ==
              doctest::Approx(utility_discover_both(swapped, Weights{{0.3, 0.7}}))
                  .epsilon(1e-12));
    }
    SUBCASE("matches the mc oracle") {
        const Weights w{{0.5, 0.5}};
        const auto est = mc_utility(kFig, w, DiscoveryRule::both(), 1000000, 808);
        CHECK(std::fabs(utility_discover_both(kFig, w) - est.mean) <= 4.0 * est.std_error);
    }
}

TEST_CASE("w = 1/2 complements/substitutes decomposition") {
    // utility = 1/2 P(grand bundle approvable) + 1/2 P(at least one approvable)
    const CounterRng rng(999);
    for (int draw = 0; draw < 200; ++draw) {
        const std::uint64_t base = 8ull * draw;
        const double m2 = -(0.05 + 1.5 * rng.u01(base));
        const double m1 = m2 * (1.05 + 2.0 * rng.u01(base + 1));
        const PriorSpec prior{{m1, m2},
                              {0.1 + 1.5 * rng.u01(base + 2), 0.1 + 1.5 * rng.u01(base + 3)},
                              0.05 + 0.9 * rng.u01(base + 4)};
        const Weights half{{0.5, 0.5}};
        for (const DiscoveryRule rule :
             {DiscoveryRule::one(0), DiscoveryRule::one(1), DiscoveryRule::both()}) {
            const double direct = rule.kind == RuleKind::Both
                                      ? utility_discover_both(prior, half)
                                      : utility_discover_one(prior, half, rule.project);
            const double decomposed = 0.5 * utility_grand_bundle(prior, rule) +
                                      0.5 * utility_at_least_one(prior, rule);
            CHECK(std::fabs(direct - decomposed) < 1e-10);
        }
    }
}

TEST_CASE("grand bundle probabilities") {
    SUBCASE("zero mean sum gives one half under any rule") {
        const PriorSpec prior{{-0.7, 0.7}, {0.8, 1.2}, 0.4};
        CHECK(utility_grand_bundle(prior, DiscoveryRule::one(0)) == doctest::Approx(0.5));
        CHECK(utility_grand_bundle(prior, DiscoveryRule::one(1)) == doctest::Approx(0.5));
        CHECK(utility_grand_bundle(prior, DiscoveryRule::both()) == doctest::Approx(0.5));
        CHECK(utility_grand_bundle(prior, DiscoveryRule::none()) == 1.0);
    }
    SUBCASE("negative sum: Both dominates, higher variance preferred") {
        const PriorSpec prior{{-1.2, 0.4}, {1.4, 0.7}, 0.5};
        const double g1 = utility_grand_bundle(prior, DiscoveryRule::one(0));
        const double g2 = utility_grand_bundle(prior, DiscoveryRule::one(1));
        const double gb = utility_grand_bundle(prior, DiscoveryRule::both());
        CHECK(g1 > g2);
        CHECK(gb > g1);
        CHECK(utility_grand_bundle(prior, DiscoveryRule::none()) == 0.0);
    }
}

TEST_CASE("at-least-one probabilities") {
    SUBCASE("worked example: ratio rule picks project 2") {
        const PriorSpec prior{{-1.0, -2.0}, {1.0, 4.0}, 0.5};
        const double one2 = utility_at_least_one(prior, DiscoveryRule::one(1));
        const double one1 = utility_at_least_one(prior, DiscoveryRule::one(0));
        CHECK(one2 == doctest::Approx(std_normal_cdf(-0.5)).epsilon(1e-12));
        CHECK(one1 == doctest::Approx(std_normal_cdf(-1.0)).epsilon(1e-12));
        CHECK(1.0 / -1.0 > 4.0 / -2.0); // sigma/mu rule favors project 2
        CHECK(one2 > one1);
        CHECK(utility_at_least_one(prior, DiscoveryRule::both()) > one2);
    }
    SUBCASE("independence limit for symmetric projects") {
        const PriorSpec prior{{-1.0, -1.0}, {1.0, 1.0}, 1e-8};
        const double got = utility_at_least_one(prior, DiscoveryRule::both());
        const double phi = std_normal_cdf(-1.0);
        CHECK(got == doctest::Approx(1.0 - (1.0 - phi) * (1.0 - phi)).epsilon(1e-6));
    }
    SUBCASE("premise violation flagged") {
        const PriorSpec prior{{-1.0, 0.5}, {1.0, 1.0}, 0.5};
        CHECK_THROWS_AS(utility_at_least_one(prior, DiscoveryRule::one(0)), std::domain_error);
    }
}

TEST_CASE("perfect correlation policy") {
    SUBCASE("indifference sits at the exact-payoff root, sigma_j/(sigma_i + 2 sigma_j)") {
        const auto res = perfect_correlation_policy(-1.0, 0.5, {0.5, 1.0}, 0.5);
        CHECK(res.boundary == CutoffBoundary::Interior);
        CHECK(res.cutoff == doctest::Approx(0.4).epsilon(1e-10));
        // the stated oracle: the exact expected-payoff difference vanishes there
        const auto at_cut = perfect_correlation_policy(-1.0, res.cutoff, {0.5, 1.0}, 0.5);
        CHECK(std::fabs(at_cut.payoff_gap) < 1e-10);

        const auto equal = perfect_correlation_policy(-1.0, 0.5, {1.0, 1.0}, 0.5);
        CHECK(equal.cutoff == doctest::Approx(1.0 / 3.0).epsilon(1e-10));
        const auto at_eq = perfect_correlation_policy(-1.0, equal.cutoff, {1.0, 1.0}, 0.5);
        CHECK(std::fabs(at_eq.payoff_gap) < 1e-10);
    }
    SUBCASE("rule flips across the cutoff") {
        CHECK(perfect_correlation_policy(-1.0, 0.2, {1.0, 1.0}, 0.5).rule.kind ==
              RuleKind::NoDiscovery);
        CHECK(perfect_correlation_policy(-1.0, 0.6, {1.0, 1.0}, 0.5).rule.kind ==
              RuleKind::Both);
    }
    SUBCASE("nonnegative mean sum: no discovery") {
        CHECK(perfect_correlation_policy(-1.0, 1.2, {1.0, 1.0}, 0.5).rule.kind ==
              RuleKind::NoDiscovery);
    }
    SUBCASE("both means negative: full discovery") {
        CHECK(perfect_correlation_policy(-1.0, -0.3, {1.0, 1.0}, 0.5).rule.kind ==
              RuleKind::Both);
    }
    SUBCASE("boundary weights") {
        CHECK(perfect_correlation_policy(-1.0, 0.5, {1.0, 1.0}, 0.05).boundary ==
              CutoffBoundary::AlwaysDiscover);
        CHECK(perfect_correlation_policy(-0.05, 0.5, {1.0, 1.0}, 0.97).boundary ==
              CutoffBoundary::NeverDiscover);
    }
    SUBCASE("mc oracle at rho = 1: one discovery reveals both") {
        const PriorSpec prior{{-1.0, 0.5}, {0.5, 1.0}, 1.0};
        const Weights w{{0.5, 0.5}};
        const auto e_one = mc_utility(prior, w, DiscoveryRule::one(0), 500000, 11);
        const auto e_both = mc_utility(prior, w, DiscoveryRule::both(), 500000, 11);
        CHECK(e_one.mean == e_both.mean);
        const double tb = 0.5 / 1.5, tj = -0.5;
        const double exact =
            0.5 * (std_normal_cdf(tb) - std_normal_cdf(tj)) + 1.0 - std_normal_cdf(tb);
        CHECK(std::fabs(e_both.mean - exact) <= 4.0 * e_both.std_error);
    }
}

TEST_CASE("payoff report") {
    const Weights half{{0.5, 0.5}};
    SUBCASE("single-rule report") {
        const auto rep = payoff_report(kFig, half, {DiscoveryRule::none()});
        CHECK(rep.best_rule.kind == RuleKind::NoDiscovery);
        CHECK(rep.margins.empty());
    }
    SUBCASE("trial balloon wins above the cutoff (sigma1 >= sigma2, w1 > 1/2)") {
        const double s1 = 0.3, s2 = 0.2, rho = 0.25, w1 = 0.7, mu = 0.5;
        const double cut = cutoff_vs_no_discovery(mu, s1, s2, rho, w1, 1).c;
        const double c = std::min(cut + 0.1, 0.95);
        const PriorSpec prior{{-mu, c * mu}, {s1, s2}, rho};
        const auto rep = payoff_report(prior, Weights{{w1, 1.0 - w1}},
                                       {DiscoveryRule::none(), DiscoveryRule::one(0),
                                        DiscoveryRule::one(1)});
        CHECK(rep.best_rule == DiscoveryRule::one(0));
    }
    SUBCASE("argmax matches the mc oracle when margins are wide") {
        const CounterRng rng(31);
        const std::vector<DiscoveryRule> rules = {DiscoveryRule::none(), DiscoveryRule::one(0),
                                                  DiscoveryRule::one(1), DiscoveryRule::both()};
        for (int draw = 0; draw < 6; ++draw) {
            const std::uint64_t base = 8ull * draw;
            const double mu = 0.2 + 1.5 * rng.u01(base);
            const double c = 0.9 * rng.u01(base + 1);
            const PriorSpec prior{{-mu, c * mu},
                                  {0.2 + 1.2 * rng.u01(base + 2), 0.2 + 1.2 * rng.u01(base + 3)},
                                  0.1 + 0.8 * rng.u01(base + 4)};
            const auto rep = payoff_report(prior, half, rules);
            const auto ests = mc_utility_multi(prior, half, rules, 200000, 1000 + draw);
            std::size_t mc_best = 0;
            bool resolved = true;
            for (std::size_t r = 1; r < rules.size(); ++r) {
                if (ests[r].mean > ests[mc_best].mean) mc_best = r;
            }
            for (std::size_t r = 0; r < rules.size(); ++r) {
                if (r != mc_best && ests[mc_best].mean - ests[r].mean <
                                        5.0 * (ests[mc_best].std_error + ests[r].std_error)) {
                    resolved = false;
                }
            }
            if (resolved) CHECK(rep.best_rule == rules[mc_best]);
        }
    }
    SUBCASE("noisy rules are evaluated through the transformed problem") {
        const auto rep =
            payoff_report(kFig, half, {DiscoveryRule::none(), DiscoveryRule::noisy(0, 0.05)});
        CHECK(rep.per_rule[1].second <= utility_discover_one(kFig, half, 0) + 1e-12);
        CHECK(rep.per_rule[1].second >= utility_no_discovery(kFig, half) - 1e-12);
    }
    SUBCASE("sequential rules are rejected") {
        CHECK_THROWS_AS(payoff_report(kFig, half, {DiscoveryRule::sequential()}),
                        std::invalid_argument);
    }
}

TEST_CASE("log-space margins agree with direct arithmetic at moderate mu") {
    const CounterRng rng(2718);
    for (int draw = 0; draw < 300; ++draw) {
        const std::uint64_t base = 8ull * draw;
        const double mu = 0.1 + 1.4 * rng.u01(base);
        const double c = 0.9 * rng.u01(base + 1);
        const double s1 = 0.1 + 1.4 * rng.u01(base + 2);
        const double s2 = 0.1 + 1.4 * rng.u01(base + 3);
        const double rho = 0.1 + 0.8 * rng.u01(base + 4);
        const double w1 = 0.15 + 0.7 * rng.u01(base + 5);
        const PriorSpec prior{{-mu, c * mu}, {s1, s2}, rho};
        const Weights w{{w1, 1.0 - w1}};

        const double pi1 = utility_discover_one(prior, w, 0);
        const double pi2 = utility_discover_one(prior, w, 1);
        const double und = utility_no_discovery(prior, w);

        const SignedMargin m1 = margin_one_vs_none(mu, c, s1, s2, rho, w1, 1);
        const SignedMargin m2 = margin_one_vs_none(mu, c, s1, s2, rho, w1, 2);
        const SignedMargin m12 = margin_one1_vs_one2(mu, c, s1, s2, rho, w1);
        if (std::fabs(pi1 - und) > 1e-12) {
            CHECK(m1.sign == (pi1 > und ? 1 : -1));
            CHECK(m1.abs == doctest::Approx(std::fabs(pi1 - und)).epsilon(1e-7));
        }
        if (std::fabs(pi2 - und) > 1e-12) {
            CHECK(m2.sign == (pi2 > und ? 1 : -1));
            CHECK(m2.abs == doctest::Approx(std::fabs(pi2 - und)).epsilon(1e-7));
        }
        if (std::fabs(pi1 - pi2) > 1e-12) {
            CHECK(m12.sign == (pi1 > pi2 ? 1 : -1));
            CHECK(m12.abs == doctest::Approx(std::fabs(pi1 - pi2)).epsilon(1e-7));
        }
    }
}

TEST_CASE("margins stay exact in the deep limit where Phi underflows") {
    // at mu = 50 with figure sigmas, plain doubles see all utilities == 1/2
    const double mu = 50.0;
    const double cs = c_star(0.05, 0.2, 0.25);
    const double css = c_star_star(0.05, 0.2, 0.25);
    CHECK(margin_one_vs_none(mu, cs - 0.02, 0.05, 0.2, 0.25, 0.5, 1).sign < 0);
    CHECK(margin_one_vs_none(mu, cs + 0.02, 0.05, 0.2, 0.25, 0.5, 1).sign > 0);
    CHECK(margin_one_vs_none(mu, css - 0.02, 0.05, 0.2, 0.25, 0.5, 2).sign < 0);
    CHECK(margin_one_vs_none(mu, css + 0.02, 0.05, 0.2, 0.25, 0.5, 2).sign > 0);
    // between the limits project 1 dominates project 2; above c**, project 2
    CHECK(margin_one1_vs_one2(mu, 0.5 * (cs + css), 0.05, 0.2, 0.25, 0.5).sign > 0);
    CHECK(margin_one1_vs_one2(mu, css + 0.1, 0.05, 0.2, 0.25, 0.5).sign < 0);
}

TEST_CASE("rule order keys break ties deterministically") {
    CHECK(rule_order_key(DiscoveryRule::none()) < rule_order_key(DiscoveryRule::one(0)));
    CHECK(rule_order_key(DiscoveryRule::one(0)) < rule_order_key(DiscoveryRule::one(1)));
    CHECK(rule_order_key(DiscoveryRule::one(1)) < rule_order_key(DiscoveryRule::both()));
    CHECK(to_string(DiscoveryRule::one(0)) == "one:1");
    CHECK(to_string(DiscoveryRule::none()) == "none");
}
