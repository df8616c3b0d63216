#pragma once

// Composite Gauss rules for integrands with algebraic endpoint singularities.
//
// Rules live on [-1,1] and are built once by Golub-Welsch, then cached.
// Two composite strategies cover everything the library integrates:
//   * away_from_pole: f is analytic on [a,b] apart from an algebraic factor at
//     each end, and has one more singularity at a point `pole` left of a.
//     Panels grow geometrically away from the pole (hp refinement).
//   * graded: f has a possibly mixed power singularity at an end of [a,b].
//     Panels shrink geometrically toward that end; the last one is
//     Jacobi-weighted with the leading exponent.

#include <Eigen/Core>
#include <algorithm>
#include <cmath>
#include <limits>

#include "nfbm/errors.hpp"

namespace nfbm::quad {

struct Rule {
    Eigen::VectorXd x;
    Eigen::VectorXd w;
};

// Weight (1-x)^alpha (1+x)^beta on [-1,1]. The returned reference stays valid.
const Rule& gauss_jacobi(int n, double alpha, double beta);
inline const Rule& gauss_legendre(int n) { return gauss_jacobi(n, 0.0, 0.0); }
// Weight exp(-x^2) on the real line.
const Rule& gauss_hermite(int n);

// int_a^b (x-a)^p (b-x)^q f(x) dx with a single Gauss-Jacobi rule.
template <typename F>
double jacobi(const F& f, double a, double b, double p, double q, int n) {
    const Rule& r = gauss_jacobi(n, q, p);
    const double h = 0.5 * (b - a);
    double s = 0.0;
    for (int k = 0; k < n; ++k) s += r.w[k] * f(a + h * (1.0 + r.x[k]));
    return s * std::pow(h, 1.0 + p + q);
}

// int_a^b (x-a)^p (b-x)^q f(x) dx, f analytic except at `pole` <= a.
// A pole at -infinity (or far away) gives a single panel.
template <typename F>
double away_from_pole(const F& f, double a, double b, double pole, double p, double q, int n,
                      double ratio = 4.0) {
    if (!(b > a)) return 0.0;
    const double d = a - pole;
    if (!(d > 0.0)) throw DomainError("away_from_pole: the pole must lie left of the interval");
    if (!std::isfinite(d) || b - pole <= ratio * d) return jacobi(f, a, b, p, q, n);
    double total = 0.0;
    double lo = a;
    bool first = true;
    while (lo < b) {
        double hi = pole + ratio * (lo - pole);
        bool last = hi >= b || (b - hi) < 1e-3 * (b - lo);
        if (last) hi = b;
        if (first && last) {
            total += jacobi(f, lo, hi, p, q, n);
        } else if (first) {
            total += jacobi([&](double x) { return f(x) * std::pow(b - x, q); }, lo, hi, p, 0.0, n);
        } else if (last) {
            total += jacobi([&](double x) { return f(x) * std::pow(x - a, p); }, lo, hi, 0.0, q, n);
        } else {
            total += jacobi([&](double x) { return f(x) * std::pow(x - a, p) * std::pow(b - x, q); },
                            lo, hi, 0.0, 0.0, n);
        }
        first = false;
        lo = hi;
    }
    return total;
}

// int_a^b f(x) dx where f may blow up or lose smoothness at a like
// sum_k c_k (x-a)^{e_k}; `lead` is the most singular exponent (> -1).
template <typename F>
double graded_left(const F& f, double a, double b, double lead, int n, int levels = 24,
                   double ratio = 4.0) {
    if (!(b > a)) return 0.0;
    const double L = b - a;
    // stop grading before panel nodes collide with a in floating point
    const double floor_width = 512.0 * std::numeric_limits<double>::epsilon() * std::max(std::abs(a), std::abs(b));
    while (levels > 0 && L * std::pow(ratio, -levels) < floor_width) --levels;
    double total = 0.0;
    double hi = b;
    for (int k = 1; k <= levels; ++k) {
        double lo = a + L * std::pow(ratio, -k);
        total += jacobi(f, lo, hi, 0.0, 0.0, n);
        hi = lo;
    }
    total += jacobi([&](double x) { return f(x) * std::pow(x - a, -lead); }, a, hi, lead, 0.0, n);
    return total;
}

template <typename F>
double graded_right(const F& f, double a, double b, double lead, int n, int levels = 24,
                    double ratio = 4.0) {
    return graded_left([&](double y) { return f(a + b - y); }, a, b, lead, n, levels, ratio);
}

// Both ends singular: split at the midpoint.
template <typename F>
double graded_both(const F& f, double a, double b, double lead_a, double lead_b, int n,
                   int levels = 24) {
    const double c = 0.5 * (a + b);
    return graded_left(f, a, c, lead_a, n, levels) + graded_right(f, c, b, lead_b, n, levels);
}

struct Result {
    double value = 0.0;
    double error = 0.0;  // |I_2n - I_n|
    int nodes = 0;       // nodes per panel of the accepted estimate
    bool converged = false;
};

// Doubles the per-panel node count until successive estimates agree to rtol
// (relative) or atol (absolute), up to max_nodes per panel.
template <typename G>
Result converge(const G& estimate, int n0, double rtol, int max_nodes, double atol = 0.0) {
    Result r;
    double prev = estimate(n0);
    for (int n = 2 * n0; n <= max_nodes; n *= 2) {
        double cur = estimate(n);
        r.value = cur;
        r.error = std::abs(cur - prev);
        r.nodes = n;
        if (r.error <= rtol * std::abs(cur) || r.error <= atol) {
            r.converged = true;
            return r;
        }
        prev = cur;
    }
    return r;
}

}  // namespace nfbm::quad
