// Exact orientation test via error-free transformations and expansion
// arithmetic. A fast filter answers the common case in double precision.

#include "curveloc/geometry.hpp"

#include <array>
#include <cmath>
#include <limits>

namespace curveloc {

namespace {

inline void two_sum(double a, double b, double& s, double& e) {
    s = a + b;
    double bv = s - a;
    double av = s - bv;
    e = (a - av) + (b - bv);
}

inline void two_product(double a, double b, double& p, double& e) {
    p = a * b;
    e = std::fma(a, b, -p);
}

// Adds a scalar to a nonoverlapping expansion (Shewchuk's Grow-Expansion).
template <std::size_t N>
void grow(std::array<double, N>& e, std::size_t& len, double b) {
    double q = b;
    std::size_t out = 0;
    for (std::size_t i = 0; i < len; ++i) {
        double s, err;
        two_sum(q, e[i], s, err);
        q = s;
        if (err != 0.0) e[out++] = err;
    }
    if (q != 0.0 || out == 0) e[out++] = q;
    len = out;
}

}  // namespace

int orient2d(const Point& a, const Point& b, const Point& c) {
    const double detleft = (a.x - c.x) * (b.y - c.y);
    const double detright = (a.y - c.y) * (b.x - c.x);
    const double det = detleft - detright;
    const double detsum = std::abs(detleft) + std::abs(detright);
    constexpr double eps = std::numeric_limits<double>::epsilon() / 2;
    constexpr double bound = (3.0 + 16.0 * eps) * eps;
    if (std::abs(det) > bound * detsum) return det > 0 ? 1 : -1;

    // Exact: expand (ax-cx), (by-cy), (ay-cy), (bx-cx) into two-term sums and
    // accumulate all partial products.
    double acx, acx_e, bcy, bcy_e, acy, acy_e, bcx, bcx_e;
    two_sum(a.x, -c.x, acx, acx_e);
    two_sum(b.y, -c.y, bcy, bcy_e);
    two_sum(a.y, -c.y, acy, acy_e);
    two_sum(b.x, -c.x, bcx, bcx_e);

    std::array<double, 32> e{};
    std::size_t len = 0;
    const std::array<double, 2> l1{acx, acx_e}, l2{bcy, bcy_e}, r1{acy, acy_e}, r2{bcx, bcx_e};
    for (double u : l1) {
        for (double v : l2) {
            double p, pe;
            two_product(u, v, p, pe);
            grow(e, len, p);
            grow(e, len, pe);
        }
    }
    for (double u : r1) {
        for (double v : r2) {
            double p, pe;
            two_product(u, v, p, pe);
            grow(e, len, -p);
            grow(e, len, -pe);
        }
    }
    for (std::size_t i = len; i-- > 0;) {
        if (e[i] > 0) return 1;
        if (e[i] < 0) return -1;
    }
    return 0;
}

}  // namespace curveloc
