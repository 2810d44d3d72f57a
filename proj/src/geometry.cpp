#include "curveloc/geometry.hpp"

#include "numeric.hpp"

#include <algorithm>
#include <limits>
#include <numbers>

namespace curveloc {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kHalfPi = std::numbers::pi / 2;

// Quadrant boundaries are stored as exact multiples of pi/2 so that the
// extreme points of a circle come out exact.
Point circle_point(const Point& c, double r, double t) {
    for (int k = 0; k <= 4; ++k) {
        if (t == k * kHalfPi) {
            switch (k % 4) {
                case 0: return {c.x + r, c.y};
                case 1: return {c.x, c.y + r};
                case 2: return {c.x - r, c.y};
                default: return {c.x, c.y - r};
            }
        }
    }
    return {c.x + r * std::cos(t), c.y + r * std::sin(t)};
}

bool upper_arc(const CircleArc& arc) { return arc.quadrant == 0 || arc.quadrant == 1; }
bool right_arc(const CircleArc& arc) { return arc.quadrant == 0 || arc.quadrant == 3; }

double normalized_angle(const Point& c, const Point& p) {
    double a = std::atan2(p.y - c.y, p.x - c.x);
    if (a < 0) a += 2 * kPi;
    return a;
}

// Angle of p measured within the range of the arc, if it is inside it.
std::optional<double> angle_on_arc(const CircleArc& arc, const Point& p, double tol) {
    const double a = normalized_angle(arc.center, p);
    for (double cand : {a, a + 2 * kPi, a - 2 * kPi}) {
        if (cand >= arc.t0 - tol && cand <= arc.t1 + tol) return std::clamp(cand, arc.t0, arc.t1);
    }
    return std::nullopt;
}

void push_unique(std::vector<Point>& pts, const Point& p, double tol) {
    for (const auto& q : pts) {
        if (dist(p, q) <= tol) return;
    }
    pts.push_back(p);
}

// Both members of the graph/line family expressed as polynomials in x.
struct Poly2 {
    double a, b, c;
};

std::optional<Poly2> as_poly(const MonotonePiece& p) {
    if (const auto* g = std::get_if<GraphArc>(&p.geometry)) return Poly2{g->a, g->b, g->c};
    if (const auto* l = std::get_if<LinePiece>(&p.geometry)) {
        if (l->a.x == l->b.x) return std::nullopt;
        const double m = (l->b.y - l->a.y) / (l->b.x - l->a.x);
        return Poly2{0.0, m, l->a.y - m * l->a.x};
    }
    return std::nullopt;
}

std::pair<double, double> x_span(const MonotonePiece& p) {
    const Point s = p.start(), e = p.end();
    return {std::min(s.x, e.x), std::max(s.x, e.x)};
}

}  // namespace

const char* to_string(ErrorCode code) {
    switch (code) {
        case ErrorCode::UnsupportedPair: return "UnsupportedPair";
        case ErrorCode::NoSeparatingTangent: return "NoSeparatingTangent";
        case ErrorCode::PointNotOnCurve: return "PointNotOnCurve";
        case ErrorCode::DegenerateOverlap: return "DegenerateOverlap";
        case ErrorCode::CurvedCell: return "CurvedCell";
        case ErrorCode::OnBoundary: return "OnBoundary";
        case ErrorCode::SeparationFailure: return "SeparationFailure";
        case ErrorCode::NonDisjointInput: return "NonDisjointInput";
        case ErrorCode::AmbiguousOrder: return "AmbiguousOrder";
        case ErrorCode::OutsideWorkingBox: return "OutsideWorkingBox";
        case ErrorCode::VersionMismatch: return "VersionMismatch";
        case ErrorCode::CorruptData: return "CorruptData";
        case ErrorCode::KTooLarge: return "KTooLarge";
        case ErrorCode::InvalidInput: return "InvalidInput";
        case ErrorCode::UnsupportedScene: return "UnsupportedScene";
    }
    return "Unknown";
}

const char* to_string(Side s) {
    switch (s) {
        case Side::Above: return "above";
        case Side::Below: return "below";
        case Side::On: return "on";
        case Side::OutsideSpan: return "outside_span";
    }
    return "?";
}

// ---------------------------------------------------------------- boxes

BoundingBox BoundingBox::empty() {
    constexpr double inf = std::numeric_limits<double>::infinity();
    return {{inf, inf}, {-inf, -inf}};
}

void BoundingBox::expand(const Point& p) {
    min.x = std::min(min.x, p.x);
    min.y = std::min(min.y, p.y);
    max.x = std::max(max.x, p.x);
    max.y = std::max(max.y, p.y);
}

void BoundingBox::expand(const BoundingBox& b) {
    if (b.is_empty()) return;
    expand(b.min);
    expand(b.max);
}

bool BoundingBox::contains(const Point& p, double tol) const {
    return p.x >= min.x - tol && p.x <= max.x + tol && p.y >= min.y - tol && p.y <= max.y + tol;
}

bool BoundingBox::intersects(const BoundingBox& b, double tol) const {
    return !(b.min.x > max.x + tol || b.max.x < min.x - tol || b.min.y > max.y + tol ||
             b.max.y < min.y - tol);
}

bool BoundingBox::encloses(const BoundingBox& b, double tol) const {
    return contains(b.min, tol) && contains(b.max, tol);
}

BoundingBox BoundingBox::inflated(double fraction) const {
    double mx = width() * fraction, my = height() * fraction;
    // Degenerate extents borrow the other axis so the box never collapses.
    const double fallback = std::max({mx, my, 1.0 * fraction});
    if (mx == 0) mx = fallback;
    if (my == 0) my = fallback;
    return {{min.x - mx, min.y - my}, {max.x + mx, max.y + my}};
}

// ---------------------------------------------------------------- curves

void Curve::validate() const {
    auto bad = [&](const std::string& why) {
        throw GeometryError(ErrorCode::InvalidInput, "curve " + std::to_string(id) + ": " + why);
    };
    if (const auto* s = std::get_if<SegmentCurve>(&shape)) {
        if (!is_finite(s->a) || !is_finite(s->b)) bad("non-finite endpoint");
        if (s->a == s->b) bad("segment endpoints coincide");
    } else if (const auto* d = std::get_if<DiskCurve>(&shape)) {
        if (!is_finite(d->center) || !std::isfinite(d->radius)) bad("non-finite disk");
        if (!(d->radius > 0)) bad("radius must be positive");
    } else if (const auto* p = std::get_if<ParabolaArc>(&shape)) {
        for (double v : {p->a, p->b, p->c, p->x_lo, p->x_hi}) {
            if (!std::isfinite(v)) bad("non-finite coefficient");
        }
        if (!(p->x_lo < p->x_hi)) bad("x_lo must be below x_hi");
    }
}

Curve make_segment(int id, Point a, Point b) { return Curve{id, SegmentCurve{a, b}}; }
Curve make_disk(int id, Point center, double radius) { return Curve{id, DiskCurve{center, radius}}; }
Curve make_parabola(int id, double a, double b, double c, double x_lo, double x_hi) {
    return Curve{id, ParabolaArc{a, b, c, x_lo, x_hi}};
}

// ---------------------------------------------------------------- pieces

double MonotonePiece::t_begin() const {
    switch (kind()) {
        case PieceKind::Line: return 0.0;
        case PieceKind::Graph: return std::get<GraphArc>(geometry).x_lo;
        case PieceKind::Circle: return std::get<CircleArc>(geometry).t0;
    }
    return 0.0;
}

double MonotonePiece::t_end() const {
    switch (kind()) {
        case PieceKind::Line: return 1.0;
        case PieceKind::Graph: return std::get<GraphArc>(geometry).x_hi;
        case PieceKind::Circle: return std::get<CircleArc>(geometry).t1;
    }
    return 1.0;
}

Point MonotonePiece::point_at(double t) const {
    switch (kind()) {
        case PieceKind::Line: {
            const auto& l = std::get<LinePiece>(geometry);
            if (t == 0.0) return l.a;
            if (t == 1.0) return l.b;
            return l.a + (l.b - l.a) * t;
        }
        case PieceKind::Graph: {
            const auto& g = std::get<GraphArc>(geometry);
            return {t, (g.a * t + g.b) * t + g.c};
        }
        case PieceKind::Circle: {
            const auto& c = std::get<CircleArc>(geometry);
            return circle_point(c.center, c.radius, t);
        }
    }
    return {};
}

Point MonotonePiece::tangent_at(double t) const {
    Point d;
    switch (kind()) {
        case PieceKind::Line: {
            const auto& l = std::get<LinePiece>(geometry);
            d = l.b - l.a;
            break;
        }
        case PieceKind::Graph: {
            const auto& g = std::get<GraphArc>(geometry);
            d = {1.0, 2 * g.a * t + g.b};
            break;
        }
        case PieceKind::Circle: d = {-std::sin(t), std::cos(t)}; break;
    }
    return d * (1.0 / norm(d));
}

double MonotonePiece::project(const Point& p, double lo, double hi) const {
    if (lo > hi) std::swap(lo, hi);
    switch (kind()) {
        case PieceKind::Line: {
            const auto& l = std::get<LinePiece>(geometry);
            const Point d = l.b - l.a;
            return std::clamp(dot(p - l.a, d) / dot(d, d), lo, hi);
        }
        case PieceKind::Graph: {
            const auto& g = std::get<GraphArc>(geometry);
            // Stationary points of the squared distance form a cubic in x.
            const double dy = g.c - p.y;
            std::vector<double> cands{lo, hi};
            for (double r : detail::solve_cubic(2 * g.a * g.a, 3 * g.a * g.b,
                                                g.b * g.b + 2 * g.a * dy + 1.0, g.b * dy - p.x)) {
                if (r > lo && r < hi) cands.push_back(r);
            }
            double best = cands[0], bestd = std::numeric_limits<double>::infinity();
            for (double x : cands) {
                const double d = dist(point_at(x), p);
                if (d < bestd) bestd = d, best = x;
            }
            return best;
        }
        case PieceKind::Circle: {
            const auto& c = std::get<CircleArc>(geometry);
            if (p == c.center) return lo;
            const double a = normalized_angle(c.center, p);
            for (double cand : {a, a + 2 * kPi, a - 2 * kPi}) {
                if (cand >= lo && cand <= hi) return cand;
            }
            return dist(p, point_at(lo)) <= dist(p, point_at(hi)) ? lo : hi;
        }
    }
    return lo;
}

double MonotonePiece::distance(const Point& p) const { return dist(p, point_at(project(p))); }

std::optional<double> MonotonePiece::x_at_y(double y) const {
    const Point s = start(), e = end();
    const double ylo = std::min(s.y, e.y), yhi = std::max(s.y, e.y);
    if (y < ylo || y > yhi) return std::nullopt;
    switch (kind()) {
        case PieceKind::Line: {
            if (s.y == e.y) return std::nullopt;
            if (y == s.y) return s.x;
            if (y == e.y) return e.x;
            return s.x + (e.x - s.x) * (y - s.y) / (e.y - s.y);
        }
        case PieceKind::Graph: {
            const auto& g = std::get<GraphArc>(geometry);
            if (s.y == e.y) return std::nullopt;
            if (y == s.y) return s.x;
            if (y == e.y) return e.x;
            // Monotone on the span: bracketed root.
            return detail::bisect_root([&](double x) { return (g.a * x + g.b) * x + g.c - y; },
                                       g.x_lo, g.x_hi);
        }
        case PieceKind::Circle: {
            const auto& c = std::get<CircleArc>(geometry);
            if (y == s.y) return s.x;
            if (y == e.y) return e.x;
            const double dy = y - c.center.y;
            const double h = std::sqrt(std::max(0.0, c.radius * c.radius - dy * dy));
            return right_arc(c) ? c.center.x + h : c.center.x - h;
        }
    }
    return std::nullopt;
}

std::optional<double> MonotonePiece::y_at_x(double x) const {
    const Point s = start(), e = end();
    const double xlo = std::min(s.x, e.x), xhi = std::max(s.x, e.x);
    if (x < xlo || x > xhi) return std::nullopt;
    switch (kind()) {
        case PieceKind::Line: {
            if (s.x == e.x) return std::nullopt;
            if (x == s.x) return s.y;
            if (x == e.x) return e.y;
            return s.y + (e.y - s.y) * (x - s.x) / (e.x - s.x);
        }
        case PieceKind::Graph: {
            const auto& g = std::get<GraphArc>(geometry);
            return (g.a * x + g.b) * x + g.c;
        }
        case PieceKind::Circle: {
            const auto& c = std::get<CircleArc>(geometry);
            if (x == s.x) return s.y;
            if (x == e.x) return e.y;
            const double dx = x - c.center.x;
            const double h = std::sqrt(std::max(0.0, c.radius * c.radius - dx * dx));
            return upper_arc(c) ? c.center.y + h : c.center.y - h;
        }
    }
    return std::nullopt;
}

std::vector<MonotonePiece> monotone_decompose(const Curve& curve) {
    curve.validate();
    std::vector<MonotonePiece> out;
    if (const auto* s = std::get_if<SegmentCurve>(&curve.shape)) {
        LinePiece l{s->a, s->b};
        if (lex_less(l.b, l.a)) std::swap(l.a, l.b);
        out.push_back({curve.id, 0, Convexity::Linear, l});
    } else if (const auto* d = std::get_if<DiskCurve>(&curve.shape)) {
        for (int q = 0; q < 4; ++q) {
            CircleArc arc{d->center, d->radius, q * kHalfPi, (q + 1) * kHalfPi, q};
            out.push_back({curve.id, q, q < 2 ? Convexity::Concave : Convexity::Convex, arc});
        }
    } else {
        const auto& p = std::get<ParabolaArc>(curve.shape);
        const Convexity cv =
            p.a > 0 ? Convexity::Convex : (p.a < 0 ? Convexity::Concave : Convexity::Linear);
        std::vector<double> cuts{p.x_lo};
        if (p.a != 0) {
            const double xv = -p.b / (2 * p.a);
            if (xv > p.x_lo && xv < p.x_hi) cuts.push_back(xv);
        }
        cuts.push_back(p.x_hi);
        for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
            out.push_back({curve.id, static_cast<int>(i), cv,
                           GraphArc{p.a, p.b, p.c, cuts[i], cuts[i + 1]}});
        }
    }
    return out;
}

Side above_below(const MonotonePiece& piece, const Point& q, double epsilon) {
    switch (piece.kind()) {
        case PieceKind::Line: {
            const auto& l = std::get<LinePiece>(piece.geometry);
            const bool vertical = l.a.x == l.b.x;
            if (vertical ? (q.y < l.a.y || q.y > l.b.y) : (q.x < l.a.x || q.x > l.b.x)) {
                return Side::OutsideSpan;
            }
            const Point d = l.b - l.a;
            const double r = cross(d, q - l.a) / norm(d);
            if (std::abs(r) <= epsilon) return Side::On;
            return r > 0 ? Side::Above : Side::Below;
        }
        case PieceKind::Graph: {
            const auto& g = std::get<GraphArc>(piece.geometry);
            if (q.x < g.x_lo || q.x > g.x_hi) return Side::OutsideSpan;
            const double s = 2 * g.a * q.x + g.b;
            const double r = (q.y - ((g.a * q.x + g.b) * q.x + g.c)) / std::sqrt(1 + s * s);
            if (std::abs(r) <= epsilon) return Side::On;
            return r > 0 ? Side::Above : Side::Below;
        }
        case PieceKind::Circle: {
            const auto& c = std::get<CircleArc>(piece.geometry);
            const auto [xlo, xhi] = x_span(piece);
            if (q.x < xlo || q.x > xhi) return Side::OutsideSpan;
            if (std::abs(dist(q, c.center) - c.radius) <= epsilon) return Side::On;
            const double y = *piece.y_at_x(q.x);
            return q.y > y ? Side::Above : Side::Below;
        }
    }
    return Side::OutsideSpan;
}

// ---------------------------------------------------------------- intersections

std::vector<Point> intersect_segments(const Segment& s1, const Segment& s2) {
    std::vector<Point> out;
    const int o1 = orient2d(s1.a, s1.b, s2.a);
    const int o2 = orient2d(s1.a, s1.b, s2.b);
    const int o3 = orient2d(s2.a, s2.b, s1.a);
    const int o4 = orient2d(s2.a, s2.b, s1.b);
    auto on_seg = [](const Segment& s, const Point& p) {
        return std::min(s.a.x, s.b.x) <= p.x && p.x <= std::max(s.a.x, s.b.x) &&
               std::min(s.a.y, s.b.y) <= p.y && p.y <= std::max(s.a.y, s.b.y);
    };
    if (o1 == 0 && o2 == 0) {
        // Collinear (o3, o4 are zero too).
        for (const Point& p : {s2.a, s2.b}) {
            if (on_seg(s1, p)) push_unique(out, p, 0.0);
        }
        for (const Point& p : {s1.a, s1.b}) {
            if (on_seg(s2, p)) push_unique(out, p, 0.0);
        }
        return out;
    }
    if (o1 * o2 > 0 || o3 * o4 > 0) return out;
    // Shared or touching endpoints are returned verbatim.
    if (o1 == 0) return {s2.a};
    if (o2 == 0) return {s2.b};
    if (o3 == 0) return {s1.a};
    if (o4 == 0) return {s1.b};
    const Point d1 = s1.b - s1.a, d2 = s2.b - s2.a;
    const double t = cross(s2.a - s1.a, d2) / cross(d1, d2);
    Point p = s1.a + d1 * std::clamp(t, 0.0, 1.0);
    // Keep the crossing exactly on axis-parallel segments such as walls.
    for (const Segment* s : {&s1, &s2}) {
        if (s->a.x == s->b.x) p.x = s->a.x;
        if (s->a.y == s->b.y) p.y = s->a.y;
    }
    return {p};
}

std::vector<double> intersect_piece_segment(const MonotonePiece& piece, const Segment& s, double epsilon) {
    std::vector<double> ts;
    const Point d = s.b - s.a;
    const double len2 = dot(d, d);
    auto on_segment_param = [&](const Point& p) {
        const double u = dot(p - s.a, d) / len2;
        const double tol = len2 > 0 ? epsilon / std::sqrt(len2) : 0.0;
        return u >= -tol && u <= 1 + tol;
    };
    switch (piece.kind()) {
        case PieceKind::Line: {
            const auto& l = std::get<LinePiece>(piece.geometry);
            const Point ld = l.b - l.a;
            for (const Point& p : intersect_segments({l.a, l.b}, s)) {
                ts.push_back(std::clamp(dot(p - l.a, ld) / dot(ld, ld), 0.0, 1.0));
            }
            break;
        }
        case PieceKind::Graph: {
            const auto& g = std::get<GraphArc>(piece.geometry);
            // a.y + u dy = f(a.x + u dx)
            const double A = g.a * d.x * d.x;
            const double B = (2 * g.a * s.a.x + g.b) * d.x - d.y;
            const double C = (g.a * s.a.x + g.b) * s.a.x + g.c - s.a.y;
            for (double u : detail::solve_quadratic(A, B, C)) {
                const double tol = epsilon / std::sqrt(len2);
                if (u < -tol || u > 1 + tol) continue;
                const double x = s.a.x + std::clamp(u, 0.0, 1.0) * d.x;
                const double xtol = epsilon;
                if (x < g.x_lo - xtol || x > g.x_hi + xtol) continue;
                ts.push_back(std::clamp(x, g.x_lo, g.x_hi));
            }
            if (d.x == 0) {
                // Vertical segment: at most one crossing, at x = s.a.x.
                ts.clear();
                const double x = s.a.x;
                if (x >= g.x_lo && x <= g.x_hi) {
                    const double y = (g.a * x + g.b) * x + g.c;
                    if (y >= std::min(s.a.y, s.b.y) - epsilon && y <= std::max(s.a.y, s.b.y) + epsilon) {
                        ts.push_back(x);
                    }
                }
            }
            break;
        }
        case PieceKind::Circle: {
            const auto& c = std::get<CircleArc>(piece.geometry);
            const Point f = s.a - c.center;
            const double A = len2;
            const double B = 2 * dot(f, d);
            const double C = dot(f, f) - c.radius * c.radius;
            for (double u : detail::solve_quadratic(A, B, C)) {
                const Point p = s.a + d * std::clamp(u, 0.0, 1.0);
                if (!on_segment_param(s.a + d * u)) continue;
                if (auto t = angle_on_arc(c, p, epsilon / c.radius)) ts.push_back(*t);
            }
            break;
        }
    }
    std::sort(ts.begin(), ts.end());
    ts.erase(std::unique(ts.begin(), ts.end()), ts.end());
    return ts;
}

std::vector<Point> intersect_pieces(const MonotonePiece& p1, const MonotonePiece& p2, double epsilon) {
    const bool c1 = p1.kind() == PieceKind::Circle, c2 = p2.kind() == PieceKind::Circle;
    if (c1 != c2) {
        throw GeometryError(ErrorCode::UnsupportedPair, "circle arc paired with a graph piece");
    }
    std::vector<Point> out;
    // Endpoint contacts first; these are exact when pieces share endpoints.
    for (const Point& e : {p1.start(), p1.end()}) {
        if (p2.distance(e) <= epsilon) push_unique(out, e, epsilon);
    }
    for (const Point& e : {p2.start(), p2.end()}) {
        if (p1.distance(e) <= epsilon) push_unique(out, e, epsilon);
    }

    if (c1) {
        const auto& a = std::get<CircleArc>(p1.geometry);
        const auto& b = std::get<CircleArc>(p2.geometry);
        const Point d = b.center - a.center;
        const double L = norm(d);
        if (L <= epsilon && std::abs(a.radius - b.radius) <= epsilon) {
            // Same supporting circle: overlapping angle ranges are a degenerate overlap.
            const double lo = std::max(a.t0, b.t0), hi = std::min(a.t1, b.t1);
            if (hi - lo > epsilon / a.radius) {
                throw GeometryError(ErrorCode::DegenerateOverlap, "coincident circular arcs");
            }
            return out;
        }
        if (L == 0) return out;
        if (L > a.radius + b.radius + epsilon || L < std::abs(a.radius - b.radius) - epsilon) return out;
        const double x = (L * L + a.radius * a.radius - b.radius * b.radius) / (2 * L);
        const double h2 = a.radius * a.radius - x * x;
        const Point u = d * (1.0 / L);
        const Point v{-u.y, u.x};
        const Point base = a.center + u * x;
        std::vector<Point> cands;
        if (h2 <= (epsilon * epsilon)) {
            cands.push_back(base);
        } else {
            const double h = std::sqrt(h2);
            cands.push_back(base + v * h);
            cands.push_back(base - v * h);
        }
        for (const Point& p : cands) {
            if (angle_on_arc(a, p, epsilon / a.radius) && angle_on_arc(b, p, epsilon / b.radius)) {
                push_unique(out, p, epsilon);
            }
        }
        return out;
    }

    const auto q1 = as_poly(p1), q2 = as_poly(p2);
    const auto [lo1, hi1] = x_span(p1);
    const auto [lo2, hi2] = x_span(p2);
    if (!q1 || !q2) {
        // A vertical line piece is involved.
        const MonotonePiece& vert = q1 ? p2 : p1;
        const MonotonePiece& other = q1 ? p1 : p2;
        const auto& vl = std::get<LinePiece>(vert.geometry);
        for (double t : intersect_piece_segment(other, {vl.a, vl.b}, epsilon)) {
            push_unique(out, other.point_at(t), epsilon);
        }
        return out;
    }
    const double A = q1->a - q2->a, B = q1->b - q2->b, C = q1->c - q2->c;
    const double scale = std::max({std::abs(q1->a), std::abs(q1->b), std::abs(q1->c), 1.0});
    if (std::abs(A) <= 1e-14 * scale && std::abs(B) <= 1e-14 * scale && std::abs(C) <= 1e-12 * scale) {
        const double lo = std::max(lo1, lo2), hi = std::min(hi1, hi2);
        if (hi - lo > epsilon) {
            throw GeometryError(ErrorCode::DegenerateOverlap, "coincident graph pieces");
        }
        return out;
    }
    for (double x : detail::solve_quadratic(A, B, C)) {
        if (x < std::max(lo1, lo2) - epsilon || x > std::min(hi1, hi2) + epsilon) continue;
        const double xc = std::clamp(x, lo1, hi1);
        push_unique(out, Point{xc, *p1.y_at_x(xc)}, epsilon);
    }
    return out;
}

// ---------------------------------------------------------------- tangents

std::optional<Segment> clip_line(const Point& p, const Point& d, const BoundingBox& box) {
    double t0 = -std::numeric_limits<double>::infinity();
    double t1 = std::numeric_limits<double>::infinity();
    const double pc[2] = {p.x, p.y}, dc[2] = {d.x, d.y};
    const double lo[2] = {box.min.x, box.min.y}, hi[2] = {box.max.x, box.max.y};
    for (int k = 0; k < 2; ++k) {
        if (dc[k] == 0) {
            if (pc[k] < lo[k] || pc[k] > hi[k]) return std::nullopt;
            continue;
        }
        double a = (lo[k] - pc[k]) / dc[k], b = (hi[k] - pc[k]) / dc[k];
        if (a > b) std::swap(a, b);
        t0 = std::max(t0, a);
        t1 = std::min(t1, b);
    }
    if (t0 >= t1) return std::nullopt;
    Point a = p + d * t0, b = p + d * t1;
    // Snap the clipped ends onto the box sides they hit.
    auto snap = [&](Point q) {
        q.x = std::clamp(q.x, box.min.x, box.max.x);
        q.y = std::clamp(q.y, box.min.y, box.max.y);
        if (d.x == 0) q.x = p.x;
        if (d.y == 0) q.y = p.y;
        return q;
    };
    return Segment{snap(a), snap(b)};
}

std::vector<Tangent> common_tangents(const Curve& c1, const Curve& c2, const BoundingBox& box) {
    const auto* d1 = std::get_if<DiskCurve>(&c1.shape);
    const auto* d2 = std::get_if<DiskCurve>(&c2.shape);
    if (!d1 || !d2) {
        std::vector<Tangent> out;
        const double eps = scene_epsilon({c1, c2});
        for (const auto& a : monotone_decompose(c1)) {
            for (const auto& b : monotone_decompose(c2)) {
                for (auto& t : common_tangents(a, b, box, eps)) out.push_back(t);
            }
        }
        return out;
    }
    std::vector<Tangent> out;
    const Point delta = d2->center - d1->center;
    const double L = norm(delta);
    if (L == 0) return out;
    const Point u = delta * (1.0 / L);
    const Point v{-u.y, u.x};
    const double r1 = d1->radius, r2 = d2->radius;
    auto emit = [&](double k, bool internal) {
        constexpr double tol = 1e-12;
        if (std::abs(k) > 1 + tol) return;
        const double s2 = 1 - k * k;
        std::vector<Point> normals;
        if (s2 <= tol) {
            normals.push_back(u * (k > 0 ? 1.0 : -1.0));
        } else {
            const double s = std::sqrt(s2);
            normals.push_back(u * k + v * s);
            normals.push_back(u * k - v * s);
        }
        for (const Point& n : normals) {
            Tangent t;
            t.internal = internal;
            t.touch1 = d1->center - n * r1;
            t.touch2 = internal ? d2->center + n * r2 : d2->center - n * r2;
            const Point dir{-n.y, n.x};
            if (auto seg = clip_line(t.touch1, dir, box)) {
                t.line = *seg;
            } else {
                t.line = {t.touch1, t.touch2};
            }
            out.push_back(t);
        }
    };
    emit((r2 - r1) / L, false);
    emit(-(r1 + r2) / L, true);
    return out;
}

std::vector<Tangent> common_tangents(const MonotonePiece& p1, const MonotonePiece& p2,
                                     const BoundingBox& box, double epsilon) {
    if (p1.kind() == PieceKind::Circle || p2.kind() == PieceKind::Circle) {
        throw GeometryError(ErrorCode::UnsupportedPair, "piece tangents are for graph pieces");
    }
    if (!intersect_pieces(p1, p2, epsilon).empty()) {
        throw GeometryError(ErrorCode::NoSeparatingTangent, "pieces intersect");
    }
    std::vector<Tangent> out;
    auto add = [&](const Point& t1, const Point& t2) {
        if (dist(t1, t2) <= epsilon) return;
        Tangent t{{t1, t2}, t1, t2, false};
        if (auto seg = clip_line(t1, t2 - t1, box)) t.line = *seg;
        for (const auto& o : out) {
            if (dist(o.touch1, t1) <= epsilon && dist(o.touch2, t2) <= epsilon) return;
        }
        out.push_back(t);
    };
    const bool g1 = p1.kind() == PieceKind::Graph, g2 = p2.kind() == PieceKind::Graph;
    if (g1 && g2) {
        const auto& a = std::get<GraphArc>(p1.geometry);
        const auto& b = std::get<GraphArc>(p2.geometry);
        if (b.a == 0) {
            // p2 is a straight graph; touching it means passing through an endpoint.
            for (const Point& e : {p2.start(), p2.end()}) {
                for (double x0 : detail::solve_quadratic(-a.a, 2 * a.a * e.x, a.b * e.x + a.c - e.y)) {
                    if (x0 >= a.x_lo && x0 <= a.x_hi) add(p1.point_at(x0), e);
                }
            }
            return out;
        }
        const double db = a.b - b.b;
        const double A = 4 * a.a * a.a - 4 * a.a * b.a;
        const double B = 4 * a.a * db;
        const double C = db * db + 4 * b.a * (a.c - b.c);
        for (double x1 : detail::solve_quadratic(A, B, C)) {
            const double x2 = (2 * a.a * x1 + db) / (2 * b.a);
            if (x1 < a.x_lo || x1 > a.x_hi || x2 < b.x_lo || x2 > b.x_hi) continue;
            add(p1.point_at(x1), p2.point_at(x2));
        }
        return out;
    }
    if (!g1 && !g2) {
        for (const Point& e1 : {p1.start(), p1.end()}) {
            for (const Point& e2 : {p2.start(), p2.end()}) add(e1, e2);
        }
        return out;
    }
    const MonotonePiece& graph = g1 ? p1 : p2;
    const MonotonePiece& line = g1 ? p2 : p1;
    const auto& g = std::get<GraphArc>(graph.geometry);
    for (const Point& e : {line.start(), line.end()}) {
        for (double x0 : detail::solve_quadratic(-g.a, 2 * g.a * e.x, g.b * e.x + g.c - e.y)) {
            if (x0 < g.x_lo || x0 > g.x_hi) continue;
            if (g1) add(graph.point_at(x0), e);
            else add(e, graph.point_at(x0));
        }
    }
    return out;
}

Segment tangent_line_at(const MonotonePiece& piece, const Point& p, const BoundingBox& box, double epsilon) {
    const double t = piece.project(p);
    if (dist(piece.point_at(t), p) > epsilon) {
        throw GeometryError(ErrorCode::PointNotOnCurve, "point is not on the piece");
    }
    const Point d = piece.tangent_at(t);
    if (auto seg = clip_line(p, d, box)) return *seg;
    return {p, p + d};
}

BoundingBox bounding_box(const MonotonePiece& piece) {
    BoundingBox b = BoundingBox::empty();
    b.expand(piece.start());
    b.expand(piece.end());
    return b;
}

BoundingBox bounding_box(const Curve& curve) {
    BoundingBox b = BoundingBox::empty();
    if (const auto* d = std::get_if<DiskCurve>(&curve.shape)) {
        b.expand(Point{d->center.x - d->radius, d->center.y - d->radius});
        b.expand(Point{d->center.x + d->radius, d->center.y + d->radius});
        return b;
    }
    for (const auto& p : monotone_decompose(curve)) b.expand(bounding_box(p));
    return b;
}

double scene_epsilon(const std::vector<Curve>& curves) {
    BoundingBox b = BoundingBox::empty();
    for (const auto& c : curves) b.expand(bounding_box(c));
    if (b.is_empty() || b.diameter() == 0) return 1e-9;
    return 1e-9 * b.diameter();
}

}  // namespace curveloc
