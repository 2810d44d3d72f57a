#pragma once
// Small polynomial root helpers shared by the geometry routines.

#include <algorithm>
#include <cmath>
#include <vector>

namespace curveloc::detail {

/// Real roots of A t^2 + B t + C = 0, ascending. Near-zero discriminants
/// (relative to the coefficients) collapse to a double root.
inline std::vector<double> solve_quadratic(double A, double B, double C) {
    const double scale = std::max({std::abs(A), std::abs(B), std::abs(C)});
    if (scale == 0) return {};
    if (std::abs(A) <= 1e-15 * scale) {
        if (B == 0) return {};
        return {-C / B};
    }
    const double disc = B * B - 4 * A * C;
    const double tol = 1e-12 * (B * B + std::abs(4 * A * C));
    if (disc < -tol) return {};
    if (disc <= tol) return {-B / (2 * A)};
    const double s = std::sqrt(disc);
    const double q = -0.5 * (B + (B >= 0 ? s : -s));
    double r1 = q / A;
    double r2 = C / q;
    if (r1 > r2) std::swap(r1, r2);
    return {r1, r2};
}

/// Real roots of a t^3 + b t^2 + c t + d = 0, Newton-polished.
inline std::vector<double> solve_cubic(double a, double b, double c, double d) {
    const double scale = std::max({std::abs(a), std::abs(b), std::abs(c), std::abs(d)});
    if (scale == 0) return {};
    if (std::abs(a) <= 1e-14 * scale) return solve_quadratic(b, c, d);
    const double B = b / a, C = c / a, D = d / a;
    const double p = C - B * B / 3;
    const double q = 2 * B * B * B / 27 - B * C / 3 + D;
    std::vector<double> roots;
    const double disc = q * q / 4 + p * p * p / 27;
    if (disc > 0) {
        const double s = std::sqrt(disc);
        roots.push_back(std::cbrt(-q / 2 + s) + std::cbrt(-q / 2 - s) - B / 3);
    } else if (p == 0) {
        roots.push_back(-B / 3);
    } else {
        const double r = std::sqrt(-p / 3);
        const double phi = std::acos(std::clamp(-q / (2 * r * r * r), -1.0, 1.0));
        for (int k = 0; k < 3; ++k) {
            roots.push_back(2 * r * std::cos((phi - 2 * M_PI * k) / 3) - B / 3);
        }
    }
    for (double& t : roots) {
        for (int it = 0; it < 4; ++it) {
            const double f = ((a * t + b) * t + c) * t + d;
            const double df = (3 * a * t + 2 * b) * t + c;
            if (df == 0) break;
            t -= f / df;
        }
    }
    std::sort(roots.begin(), roots.end());
    return roots;
}

/// Root of a function with a sign change on [lo, hi] (endpoints included).
template <class F>
double bisect_root(F f, double lo, double hi) {
    double flo = f(lo);
    if (flo == 0) return lo;
    if (f(hi) == 0) return hi;
    for (int it = 0; it < 200 && hi - lo > 0; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (mid == lo || mid == hi) break;
        const double fm = f(mid);
        if (fm == 0) return mid;
        if ((fm > 0) == (flo > 0)) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

}  // namespace curveloc::detail
