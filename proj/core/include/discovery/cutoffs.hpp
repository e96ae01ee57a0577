#pragma once

#include "discovery/payoffs.hpp"

#include <vector>

namespace discovery {

/// Large-mu limit of the project-1 discovery cutoff: rho*sigma2/(sigma1 + 2*rho*sigma2).
double c_star(double sigma1, double sigma2, double rho);

/// Large-mu limit of the project-2 discovery cutoff: sigma2/(rho*sigma1 + 2*sigma2).
double c_star_star(double sigma1, double sigma2, double rho);

/// Below c_ell, single discovery of project 1 eventually beats full discovery.
double c_ell(double sigma1, double sigma2, double rho);

/// Above c_h, full discovery eventually beats single discovery of project 1.
double c_h(double sigma1, double sigma2, double rho);

struct CutoffResult {
    double c = 0.0;
    CutoffBoundary boundary = CutoffBoundary::Interior;
    double bracket_width = 0.0;
    int iterations = 0;
    double residual = 0.0; // H at the root, linear scale (0 when underflowed)
};

/// Root in c of the discover-vs-nothing indifference
///   ((1-w1)/w1) * Phi(-c*mu/s_spoil) = Phi(-(1-c)*mu/s_improve)
/// for discovering `project` (1 or 2) under mu1 = -mu < 0 <= c*mu = mu2.
/// The two sides are monotone in opposite directions, so the interior root is
/// unique; endpoint signs are checked first so boundary cases are flagged
/// instead of fabricating a root at 0 or 1. Comparisons run in log space, so
/// arbitrarily large mu is fine.
CutoffResult cutoff_vs_no_discovery(double mu, double sigma1, double sigma2, double rho,
                                    double w1, int project);

/// dc/dmu along the indifference curve, by the implicit function theorem.
/// Positive iff w1 > 1/2 (zero at w1 = 1/2). Evaluated through the ratio of
/// the two normal densities in log space so large mu does not underflow.
double cutoff_derivative(double mu, double c, double sigma1, double sigma2, double rho,
                         double w1, int project = 1);

struct CurvePoint {
    double mu = 0.0;
    CutoffResult cutoff;
};

/// Trace the cutoff curve over a mu grid (entries must be positive).
std::vector<CurvePoint> trace_cutoff_curve(const std::vector<double>& mu_grid, double sigma1,
                                           double sigma2, double rho, double w1, int project);

enum class CNoStatus { Interior, AlwaysBoth, NeverBoth };

struct CNoPoint {
    double mu = 0.0;
    CNoStatus status = CNoStatus::Interior;
    double c = 0.0; // root when Interior
};

struct CNoTrace {
    std::vector<CNoPoint> points;
    double c_no_estimate = 0.0;   // root at the largest mu in the grid
    double convergence_gap = 0.0; // change over the trailing half of the grid
};

/// Indifference points between full discovery and no discovery at w = (1/2, 1/2):
/// for each mu, bisect in c on utility_discover_both - utility_no_discovery.
/// The limiting c_no is reported as the root at the largest grid mu.
CNoTrace c_no_curve(double sigma1, double sigma2, double rho,
                    const std::vector<double>& mu_grid);

} // namespace discovery
