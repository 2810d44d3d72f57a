#include "curveloc/oracle.hpp"

#include <algorithm>

namespace curveloc {

const char* to_string(Sign s) {
    switch (s) {
        case Sign::Inside: return "inside";
        case Sign::Outside: return "outside";
        case Sign::Above: return "above";
        case Sign::Below: return "below";
        case Sign::OutsideSpan: return "outside_span";
        case Sign::On: return "on";
    }
    return "?";
}

Sign classify(const Curve& curve, const Point& q, double epsilon) {
    if (const auto* d = std::get_if<DiskCurve>(&curve.shape)) {
        const double r = dist(q, d->center) - d->radius;
        if (std::abs(r) <= epsilon) return Sign::On;
        return r < 0 ? Sign::Inside : Sign::Outside;
    }
    if (const auto* s = std::get_if<SegmentCurve>(&curve.shape)) {
        Point a = s->a, b = s->b;
        if (lex_less(b, a)) std::swap(a, b);
        const Point d = b - a;
        const double t = std::clamp(dot(q - a, d) / dot(d, d), 0.0, 1.0);
        if (dist(q, a + d * t) <= epsilon) return Sign::On;
        if (a.x == b.x || q.x < a.x || q.x > b.x) return Sign::OutsideSpan;
        return orient2d(a, b, q) > 0 ? Sign::Above : Sign::Below;
    }
    const auto& p = std::get<ParabolaArc>(curve.shape);
    if (q.x < p.x_lo || q.x > p.x_hi) {
        const Point lo{p.x_lo, p.eval(p.x_lo)}, hi{p.x_hi, p.eval(p.x_hi)};
        if (dist(q, lo) <= epsilon || dist(q, hi) <= epsilon) return Sign::On;
        return Sign::OutsideSpan;
    }
    const double s = p.slope(q.x);
    const double r = (q.y - p.eval(q.x)) / std::sqrt(1 + s * s);
    if (std::abs(r) <= epsilon) return Sign::On;
    return r > 0 ? Sign::Above : Sign::Below;
}

SignVector sign_vector(const std::vector<Curve>& curves, const Point& q, double epsilon) {
    SignVector out;
    out.reserve(curves.size());
    for (const auto& c : curves) out.push_back(classify(c, q, epsilon));
    return out;
}

bool has_on_flag(const SignVector& v) { return std::find(v.begin(), v.end(), Sign::On) != v.end(); }

std::string format_signs(const SignVector& v) {
    std::string s;
    for (Sign x : v) {
        switch (x) {
            case Sign::Inside: s += 'I'; break;
            case Sign::Outside: s += 'O'; break;
            case Sign::Above: s += 'A'; break;
            case Sign::Below: s += 'B'; break;
            case Sign::OutsideSpan: s += 'X'; break;
            case Sign::On: s += '~'; break;
        }
    }
    return s;
}

NaiveResult naive_locate(const std::vector<Curve>& curves, const Point& q, double epsilon) {
    NaiveResult r;
    r.signs.reserve(curves.size());
    for (const auto& c : curves) {
        r.signs.push_back(classify(c, q, epsilon));
        ++r.predicates;
    }
    return r;
}

}  // namespace curveloc
