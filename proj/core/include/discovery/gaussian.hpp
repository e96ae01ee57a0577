#pragma once

#include <cstddef>
#include <vector>

namespace discovery {

/// Marginal of a single project value, in value units.
struct NormalParams {
    double mean = 0.0;
    double sd = 1.0;
};

/// Common prior over N >= 2 project values: given marginals and a single
/// pairwise correlation rho shared by every pair.
struct PriorSpec {
    std::vector<double> means;
    std::vector<double> sds;
    double rho = 0.0;

    std::size_t n() const { return means.size(); }

    /// Throws std::invalid_argument naming the violated invariant.
    /// rho = 0 and rho = 1 are admitted; the game-facing operations impose
    /// their own tighter preconditions where they need rho in (0,1).
    void validate() const;
};

/// Posterior beliefs after publicly observing one project's value exactly.
/// The observed entry is degenerate: sd 0 and known = true.
struct PosteriorBelief {
    std::vector<double> means;
    std::vector<double> sds;
    std::size_t observed = 0;
};

double std_normal_pdf(double x);
double std_normal_cdf(double x);

/// log(std_normal_cdf(x)), finite for all finite x. Uses the scaled
/// complementary error function in the deep left tail, where the plain CDF
/// underflows; accurate to ~1e-14 relative there.
double log_std_normal_cdf(double x);

/// Inverse CDF. Bracketed Newton iteration on std_normal_cdf itself (the
/// bracket is never abandoned; no closed-form approximation is trusted).
/// Round-trips through the CDF to within 1e-12.
double std_normal_quantile(double p);

/// erfc(x) and exp(x^2)*erfc(x), Cody's rational approximations.
double erfc_cody(double x);
double erfcx_cody(double x);

/// Conditional posterior of every project given v[observed] = value:
/// mean_j + rho*(sd_j/sd_i)*(value - mean_i), variance (1 - rho^2)*sd_j^2.
PosteriorBelief conditional_posterior(const PriorSpec& prior, std::size_t observed,
                                      double value);

/// Distribution of sum_{i in subset} v_i. Variance adds 2*rho*sd_i*sd_j for
/// every pair in the subset.
NormalParams sum_distribution(const PriorSpec& prior, const std::vector<std::size_t>& subset);

/// P(X <= a, Y <= b) for a standard bivariate normal pair with correlation
/// rho in (-1, 1). a and b may be +-infinity. Absolute error <= 1e-10.
double bivariate_rect_prob(double a, double b, double rho);

} // namespace discovery
