#pragma once

#include <functional>
#include <utility>
#include <vector>

namespace discovery {

struct QuadRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

/// Gauss-Legendre rule on [-1, 1].
QuadRule gauss_legendre(int n);

/// Gauss-Hermite rule for integrals of f(t)*exp(-t^2) over the real line.
QuadRule gauss_hermite(int n);

/// Integral of f over [a, b] with a fixed Gauss-Legendre rule.
double integrate_gl(const std::function<double(double)>& f, double a, double b,
                    const QuadRule& rule);

/// Adaptive bisecting Gauss-Legendre quadrature to absolute tolerance.
double integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                          double abs_tol, int max_depth = 40);

/// E[f(X)] for X ~ N(mean, sd^2), f smooth on the whole line (no panel
/// handling; callers with discontinuities split first).
double expect_normal_gh(const std::function<double(double)>& f, double mean, double sd,
                        const QuadRule& hermite_rule);

} // namespace discovery
