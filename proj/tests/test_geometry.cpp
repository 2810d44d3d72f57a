#include "doctest.h"

#include "curveloc/geometry.hpp"

#include <cmath>
#include <random>

using namespace curveloc;

namespace {

constexpr double kEps = 1e-9;

bool near(const Point& a, const Point& b, double tol = 1e-9) { return dist(a, b) <= tol; }

bool contains_point(const std::vector<Point>& pts, const Point& p, double tol = 1e-9) {
    for (const auto& q : pts) {
        if (near(p, q, tol)) return true;
    }
    return false;
}

// Signed distance from a point to the infinite line through s.
double line_distance(const Segment& s, const Point& p) {
    const Point d = s.b - s.a;
    return cross(d, p - s.a) / norm(d);
}

}  // namespace

TEST_CASE("orient2d is exact on nearly collinear input") {
    CHECK(orient2d({0, 0}, {1, 0}, {0, 1}) == 1);
    CHECK(orient2d({0, 0}, {1, 0}, {0, -1}) == -1);
    CHECK(orient2d({0, 0}, {1, 1}, {2, 2}) == 0);
    // 0.1 + 0.2 style rounding: points on y = x scaled by awkward factors.
    const Point a{0.1, 0.1}, b{0.3, 0.3};
    const Point c{0.7, 0.7};
    CHECK(orient2d(a, b, c) == 0);
    const Point c2{0.7, std::nextafter(0.7, 1.0)};
    CHECK(orient2d(a, b, c2) == 1);
}

TEST_CASE("monotone_decompose splits at extreme points") {
    SUBCASE("unit circle gives four quarter arcs") {
        const auto pieces = monotone_decompose(make_disk(0, {0, 0}, 1));
        REQUIRE(pieces.size() == 4);
        CHECK(near(pieces[0].start(), {1, 0}));
        CHECK(near(pieces[0].end(), {0, 1}));
        CHECK(near(pieces[1].end(), {-1, 0}));
        CHECK(near(pieces[2].end(), {0, -1}));
        CHECK(near(pieces[3].end(), {1, 0}));
        CHECK(pieces[0].convexity == Convexity::Concave);
        CHECK(pieces[2].convexity == Convexity::Convex);
    }
    SUBCASE("parabola splits at its vertex") {
        const auto pieces = monotone_decompose(make_parabola(0, 1, 0, 0, -1, 2));
        REQUIRE(pieces.size() == 2);
        CHECK(pieces[0].t_begin() == -1);
        CHECK(pieces[0].t_end() == 0);
        CHECK(pieces[1].t_begin() == 0);
        CHECK(pieces[1].t_end() == 2);
    }
    SUBCASE("segment is one linear piece") {
        const auto pieces = monotone_decompose(make_segment(0, {0, 0}, {1, 1}));
        REQUIRE(pieces.size() == 1);
        CHECK(pieces[0].convexity == Convexity::Linear);
    }
    SUBCASE("invalid curves are rejected") {
        CHECK_THROWS_AS(monotone_decompose(make_disk(0, {0, 0}, 0)), GeometryError);
        CHECK_THROWS_AS(monotone_decompose(make_parabola(0, 1, 0, 0, 2, 1)), GeometryError);
        CHECK_THROWS_AS(monotone_decompose(make_segment(0, {1, 1}, {1, 1})), GeometryError);
    }
}

TEST_CASE("sampled pieces are strictly monotone in x and y") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const std::vector<Curve> curves{make_disk(0, {0.3, -0.2}, 2.5), make_parabola(1, -0.7, 0.4, 1, -3, 4),
                                    make_parabola(2, 2, -1, 0, -1, 1), make_segment(3, {2, 5}, {-1, 3})};
    for (const auto& c : curves) {
        for (const auto& p : monotone_decompose(c)) {
            const Point s = p.start(), e = p.end();
            const int sx = (e.x > s.x) - (e.x < s.x), sy = (e.y > s.y) - (e.y < s.y);
            for (int k = 0; k < 1000; ++k) {
                double t1 = p.t_begin() + u(rng) * (p.t_end() - p.t_begin());
                double t2 = p.t_begin() + u(rng) * (p.t_end() - p.t_begin());
                if (t1 == t2) continue;
                if (t1 > t2) std::swap(t1, t2);
                const Point a = p.point_at(t1), b = p.point_at(t2);
                if (sx != 0) CHECK((b.x - a.x) * sx > 0);
                if (sy != 0) CHECK((b.y - a.y) * sy > 0);
            }
        }
    }
}

TEST_CASE("above_below") {
    const auto parab = monotone_decompose(make_parabola(0, 1, 0, 0, -3, 3));
    CHECK(above_below(parab[1], {2, 5}, kEps) == Side::Above);
    CHECK(above_below(parab[1], {1, 1}, kEps) == Side::On);
    CHECK(above_below(parab[1], {2, 3}, kEps) == Side::Below);
    CHECK(above_below(parab[1], {-2, 5}, kEps) == Side::OutsideSpan);

    const auto circle = monotone_decompose(make_disk(0, {0, 0}, 1));
    const auto& lower_left = circle[2];
    CHECK(above_below(lower_left, {-0.5, -0.5}, kEps) == Side::Above);

    // Brute force: sample the arc densely and compare heights at the nearest abscissa.
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(-1.5, 1.5);
    for (int k = 0; k < 2000; ++k) {
        const Point q{u(rng), u(rng)};
        const Side s = above_below(lower_left, q, kEps);
        if (q.x < -1 || q.x > 0) {
            CHECK(s == Side::OutsideSpan);
            continue;
        }
        double best = 1e9, arc_y = 0;
        for (int i = 0; i <= 20000; ++i) {
            const double t = M_PI + (M_PI / 2) * i / 20000.0;
            const double dx = std::abs(std::cos(t) - q.x);
            if (dx < best) best = dx, arc_y = std::sin(t);
        }
        if (std::abs(q.y - arc_y) < 1e-3) continue;
        CHECK(s == (q.y > arc_y ? Side::Above : Side::Below));
        // The circle sign agrees with the quadrant rule inside the span.
        const bool inside = q.x * q.x + q.y * q.y < 1;
        if (inside) CHECK(s == Side::Above);
    }
}

TEST_CASE("above_below flips under reflection across a graph") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(-2, 2);
    const auto pieces = monotone_decompose(make_parabola(0, 0.8, -0.5, 0.25, -2, 2));
    for (int k = 0; k < 500; ++k) {
        const Point q{u(rng), 3 * u(rng)};
        for (const auto& p : pieces) {
            const Side s = above_below(p, q, kEps);
            if (s == Side::OutsideSpan || s == Side::On) continue;
            const double fx = *p.y_at_x(q.x);
            const Side r = above_below(p, {q.x, 2 * fx - q.y}, kEps);
            CHECK(r == (s == Side::Above ? Side::Below : Side::Above));
        }
    }
}

TEST_CASE("intersect_pieces") {
    SUBCASE("two circles of radius 2") {
        std::vector<Point> pts;
        for (const auto& a : monotone_decompose(make_disk(0, {0, 0}, 2))) {
            for (const auto& b : monotone_decompose(make_disk(1, {2, 0}, 2))) {
                for (const auto& p : intersect_pieces(a, b, kEps)) {
                    if (!contains_point(pts, p)) pts.push_back(p);
                }
            }
        }
        REQUIRE(pts.size() == 2);
        CHECK(contains_point(pts, {1, std::sqrt(3.0)}));
        CHECK(contains_point(pts, {1, -std::sqrt(3.0)}));
    }
    SUBCASE("parabolas y=x^2 and y=2-x^2") {
        const auto a = monotone_decompose(make_parabola(0, 1, 0, 0, -3, 3));
        const auto b = monotone_decompose(make_parabola(1, -1, 0, 2, -3, 3));
        std::vector<Point> pts;
        for (const auto& p : a) {
            for (const auto& q : b) {
                for (const auto& x : intersect_pieces(p, q, kEps)) {
                    if (!contains_point(pts, x)) pts.push_back(x);
                }
            }
        }
        REQUIRE(pts.size() == 2);
        CHECK(contains_point(pts, {-1, 1}));
        CHECK(contains_point(pts, {1, 1}));
    }
    SUBCASE("disjoint circles") {
        for (const auto& a : monotone_decompose(make_disk(0, {0, 0}, 1))) {
            for (const auto& b : monotone_decompose(make_disk(1, {5, 0}, 1))) {
                CHECK(intersect_pieces(a, b, kEps).empty());
            }
        }
    }
    SUBCASE("mixed families are rejected") {
        const auto c = monotone_decompose(make_disk(0, {0, 0}, 1));
        const auto s = monotone_decompose(make_segment(1, {0, 0}, {1, 1}));
        CHECK_THROWS_AS(intersect_pieces(c[0], s[0], kEps), GeometryError);
    }
    SUBCASE("random pairs satisfy both equations and are symmetric") {
        std::mt19937_64 rng(5);
        std::uniform_real_distribution<double> u(-3, 3), r(0.5, 3);
        for (int k = 0; k < 200; ++k) {
            const auto a = monotone_decompose(make_disk(0, {u(rng), u(rng)}, r(rng)));
            const auto b = monotone_decompose(make_disk(1, {u(rng), u(rng)}, r(rng)));
            const auto& ca = std::get<CircleArc>(a[0].geometry);
            const auto& cb = std::get<CircleArc>(b[0].geometry);
            for (const auto& pa : a) {
                for (const auto& pb : b) {
                    const auto ab = intersect_pieces(pa, pb, kEps);
                    const auto ba = intersect_pieces(pb, pa, kEps);
                    CHECK(ab.size() == ba.size());
                    for (const auto& p : ab) {
                        CHECK(std::abs(dist(p, ca.center) - ca.radius) <= 10 * kEps * 10);
                        CHECK(std::abs(dist(p, cb.center) - cb.radius) <= 10 * kEps * 10);
                        CHECK(contains_point(ba, p, 1e-8));
                    }
                }
            }
        }
    }
}

TEST_CASE("common_tangents of disks") {
    const BoundingBox box{{-10, -10}, {10, 10}};
    SUBCASE("unit disks at (0,0) and (4,0)") {
        const auto t = common_tangents(make_disk(0, {0, 0}, 1), make_disk(1, {4, 0}, 1), box);
        REQUIRE(t.size() == 4);
        int horizontal = 0, through_mid = 0;
        for (const auto& tg : t) {
            CHECK(std::abs(std::abs(line_distance(tg.line, {0, 0})) - 1) < 1e-9);
            CHECK(std::abs(std::abs(line_distance(tg.line, {4, 0})) - 1) < 1e-9);
            const Point d = tg.line.b - tg.line.a;
            if (std::abs(d.y) < 1e-12) {
                ++horizontal;
                CHECK(std::abs(std::abs(tg.line.a.y) - 1) < 1e-12);
            } else {
                // Internal tangents pass through (2,0) with slope +-1/sqrt(3).
                CHECK(std::abs(line_distance(tg.line, {2, 0})) < 1e-9);
                CHECK(std::abs(std::abs(d.y / d.x) - 1 / std::sqrt(3.0)) < 1e-9);
                ++through_mid;
            }
        }
        CHECK(horizontal == 2);
        CHECK(through_mid == 2);
    }
    SUBCASE("concentric disks have none") {
        CHECK(common_tangents(make_disk(0, {0, 0}, 1), make_disk(1, {0, 0}, 2), box).empty());
    }
    SUBCASE("intersecting disks have the two external tangents") {
        CHECK(common_tangents(make_disk(0, {0, 0}, 2), make_disk(1, {2, 0}, 2), box).size() == 2);
    }
    SUBCASE("random disjoint pairs: distances and sides") {
        std::mt19937_64 rng(9);
        std::uniform_real_distribution<double> u(-8, 8), r(0.2, 1.5);
        int checked = 0;
        while (checked < 200) {
            const Point c1{u(rng), u(rng)}, c2{u(rng), u(rng)};
            const double r1 = r(rng), r2 = r(rng);
            if (dist(c1, c2) <= r1 + r2 + 0.01) continue;
            ++checked;
            const auto t = common_tangents(make_disk(0, c1, r1), make_disk(1, c2, r2), box);
            REQUIRE(t.size() == 4);
            for (const auto& tg : t) {
                const Segment s{tg.touch1, tg.touch2};
                const double d1 = line_distance(s, c1), d2 = line_distance(s, c2);
                CHECK(std::abs(std::abs(d1) - r1) <= 1e-8);
                CHECK(std::abs(std::abs(d2) - r2) <= 1e-8);
                CHECK(((d1 > 0) == (d2 > 0)) == !tg.internal);
            }
        }
    }
}

TEST_CASE("common_tangents of graph pieces") {
    const BoundingBox box{{-10, -10}, {10, 10}};
    const auto a = monotone_decompose(make_parabola(0, 1, 0, 0, -1, 0));
    const auto b = monotone_decompose(make_parabola(1, -1, 6, -10, 3, 4));
    const auto t = common_tangents(a[0], b[0], box, kEps);
    REQUIRE(!t.empty());
    for (const auto& tg : t) {
        // Slope of the tangent equals the derivative at both touching points.
        const Point d = tg.touch2 - tg.touch1;
        CHECK(std::abs(d.y / d.x - 2 * tg.touch1.x) < 1e-8);
        CHECK(std::abs(d.y / d.x - (-2 * tg.touch2.x + 6)) < 1e-8);
    }
    const auto crossing = monotone_decompose(make_parabola(2, -1, 0, 0.5, -1, 0));
    CHECK_THROWS_AS(common_tangents(a[0], crossing[0], box, kEps), GeometryError);
}

TEST_CASE("tangent_line_at") {
    const BoundingBox box{{-5, -5}, {5, 5}};
    const auto parab = monotone_decompose(make_parabola(0, 1, 0, 0, 0, 3));
    const Segment s = tangent_line_at(parab[0], {1, 1}, box, kEps);
    const Point d = s.b - s.a;
    CHECK(std::abs(d.y / d.x - 2) < 1e-12);
    CHECK(std::abs(line_distance(s, {1, 1})) < 1e-12);

    const auto circle = monotone_decompose(make_disk(0, {0, 0}, 1));
    const Segment top = tangent_line_at(circle[0], {0, 1}, box, kEps);
    CHECK(std::abs(top.a.y - 1) < 1e-12);
    CHECK(std::abs(top.b.y - 1) < 1e-12);
    const Segment right = tangent_line_at(circle[0], {1, 0}, box, kEps);
    CHECK(std::abs(right.a.x - 1) < 1e-12);
    CHECK(std::abs(right.b.x - 1) < 1e-12);
    CHECK_THROWS_AS(tangent_line_at(circle[0], {0.5, 0.5}, box, kEps), GeometryError);
}

TEST_CASE("bounding_box") {
    const auto circle = monotone_decompose(make_disk(0, {0, 0}, 1));
    CHECK(bounding_box(circle[0]) == BoundingBox{{0, 0}, {1, 1}});
    const auto parab = monotone_decompose(make_parabola(0, 1, 0, 0, 0, 2));
    CHECK(bounding_box(parab[0]) == BoundingBox{{0, 0}, {2, 4}});
    const auto seg = monotone_decompose(make_segment(0, {0, 0}, {3, 1}));
    CHECK(bounding_box(seg[0]) == BoundingBox{{0, 0}, {3, 1}});

    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> u(0, 1);
    for (const auto& c : {make_disk(0, {1, 2}, 3), make_parabola(1, -2, 1, 0, -1, 2)}) {
        for (const auto& p : monotone_decompose(c)) {
            const auto b = bounding_box(p);
            for (int k = 0; k < 1000; ++k) {
                const double t = p.t_begin() + u(rng) * (p.t_end() - p.t_begin());
                CHECK(b.contains(p.point_at(t), 1e-12));
            }
        }
    }
}

TEST_CASE("crossings on axis-parallel segments are exact") {
    const Segment wall{{0.56930147018323574, 0}, {0.56930147018323574, 10}};
    const Segment slope{{7.8614276944254744, 3.1438158786451895}, {-1, 6.9525854654718291}};
    const auto p = intersect_segments(wall, slope);
    REQUIRE(p.size() == 1);
    CHECK(p[0].x == wall.a.x);
    const Segment flat{{-1, 6.9525854654718291}, {5, 6.9525854654718291}};
    const auto q = intersect_segments(wall, flat);
    REQUIRE(q.size() == 1);
    CHECK(q[0] == Point{wall.a.x, flat.a.y});
}
