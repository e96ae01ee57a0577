#include "discovery/quadrature.hpp"

#include <cmath>
#include <stdexcept>

namespace discovery {

QuadRule gauss_legendre(int n) {
    if (n < 1) throw std::invalid_argument("gauss_legendre requires n >= 1");
    QuadRule rule;
    rule.nodes.resize(n);
    rule.weights.resize(n);
    const int m = (n + 1) / 2;
    for (int i = 0; i < m; ++i) {
        // Chebyshev-based initial guess, then Newton on P_n.
        double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
        double pp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = 0.0;
            for (int j = 0; j < n; ++j) {
                const double p2 = p1;
                p1 = p0;
                p0 = ((2.0 * j + 1.0) * x * p1 - j * p2) / (j + 1.0);
            }
            pp = n * (x * p0 - p1) / (x * x - 1.0);
            const double dx = p0 / pp;
            x -= dx;
            if (std::fabs(dx) < 1e-15) break;
        }
        rule.nodes[i] = -x;
        rule.nodes[n - 1 - i] = x;
        const double w = 2.0 / ((1.0 - x * x) * pp * pp);
        rule.weights[i] = w;
        rule.weights[n - 1 - i] = w;
    }
    return rule;
}

QuadRule gauss_hermite(int n) {
    if (n < 1) throw std::invalid_argument("gauss_hermite requires n >= 1");
    QuadRule rule;
    rule.nodes.resize(n);
    rule.weights.resize(n);
    const double pim4 = 0.7511255444649425; // pi^{-1/4}
    const int m = (n + 1) / 2;
    double x = 0.0;
    for (int i = 0; i < m; ++i) {
        if (i == 0) {
            x = std::sqrt(2.0 * n + 1.0) - 1.85575 * std::pow(2.0 * n + 1.0, -0.16667);
        } else if (i == 1) {
            x -= 1.14 * std::pow(static_cast<double>(n), 0.426) / x;
        } else if (i == 2) {
            x = 1.86 * x - 0.86 * rule.nodes[n - 1];
        } else if (i == 3) {
            x = 1.91 * x - 0.91 * rule.nodes[n - 2];
        } else {
            x = 2.0 * x - rule.nodes[n - i + 1];
        }
        double pp = 0.0;
        for (int it = 0; it < 200; ++it) {
            // Orthonormal Hermite recurrence; avoids overflow at large n.
            double p1 = pim4, p2 = 0.0;
            for (int j = 0; j < n; ++j) {
                const double p3 = p2;
                p2 = p1;
                p1 = x * std::sqrt(2.0 / (j + 1.0)) * p2 -
                     std::sqrt(static_cast<double>(j) / (j + 1.0)) * p3;
            }
            pp = std::sqrt(2.0 * n) * p2;
            const double dx = p1 / pp;
            x -= dx;
            if (std::fabs(dx) < 1e-14) break;
        }
        rule.nodes[n - 1 - i] = x;
        rule.nodes[i] = -x;
        rule.weights[n - 1 - i] = 2.0 / (pp * pp);
        rule.weights[i] = rule.weights[n - 1 - i];
    }
    if (n % 2 == 1) rule.nodes[n / 2] = 0.0;
    return rule;
}

double integrate_gl(const std::function<double(double)>& f, double a, double b,
                    const QuadRule& rule) {
    const double mid = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    double sum = 0.0;
    for (std::size_t k = 0; k < rule.nodes.size(); ++k) {
        sum += rule.weights[k] * f(mid + half * rule.nodes[k]);
    }
    return sum * half;
}

namespace {

const QuadRule& gl12() {
    static const QuadRule r = gauss_legendre(12);
    return r;
}
const QuadRule& gl24() {
    static const QuadRule r = gauss_legendre(24);
    return r;
}

double adapt_rec(const std::function<double(double)>& f, double a, double b,
                 double abs_tol, int depth) {
    const double coarse = integrate_gl(f, a, b, gl12());
    const double fine = integrate_gl(f, a, b, gl24());
    if (std::fabs(fine - coarse) <= abs_tol || depth <= 0) return fine;
    const double mid = 0.5 * (a + b);
    return adapt_rec(f, a, mid, 0.5 * abs_tol, depth - 1) +
           adapt_rec(f, mid, b, 0.5 * abs_tol, depth - 1);
}

} // namespace

double integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                          double abs_tol, int max_depth) {
    if (!(b > a)) return 0.0;
    return adapt_rec(f, a, b, abs_tol, max_depth);
}

double expect_normal_gh(const std::function<double(double)>& f, double mean, double sd,
                        const QuadRule& hermite_rule) {
    const double scale = sd * std::sqrt(2.0);
    double sum = 0.0;
    for (std::size_t k = 0; k < hermite_rule.nodes.size(); ++k) {
        sum += hermite_rule.weights[k] * f(mean + scale * hermite_rule.nodes[k]);
    }
    return sum / std::sqrt(M_PI);
}

} // namespace discovery
