#include "doctest.h"

#include "curveloc/point_location.hpp"

#include <random>

using namespace curveloc;

namespace {

std::vector<Curve> random_disks(int n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> c(0, 10), r(0.5, 3);
    std::vector<Curve> out;
    for (int i = 0; i < n; ++i) out.push_back(make_disk(i, {c(rng), c(rng)}, r(rng)));
    return out;
}

// Counts disagreements between the map and a locator over random points.
int map_failures(const PlanarSubdivision& sub, const TrapezoidalMap& map, int samples, std::uint64_t seed) {
    const FaceLocator loc(sub);
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> ux(map.box.min.x, map.box.max.x), uy(map.box.min.y, map.box.max.y);
    int bad = 0;
    for (int i = 0; i < samples; ++i) {
        const Point q{ux(rng), uy(rng)};
        const auto t = trap_locate(map, q);
        if (!t.on_boundary && t.cell != loc.locate(q)) ++bad;
    }
    return bad;
}

}  // namespace

TEST_CASE("trapezoidal map on a grid with vertical edges") {
    std::vector<Point> pts;
    std::vector<std::pair<int, int>> edges;
    const int n = 4;
    for (int i = 0; i <= n; ++i)
        for (int j = 0; j <= n; ++j) pts.push_back({double(i), double(j)});
    auto id = [&](int i, int j) { return i * (n + 1) + j; };
    for (int i = 0; i <= n; ++i)
        for (int j = 0; j <= n; ++j) {
            if (i < n) edges.push_back({id(i, j), id(i + 1, j)});
            if (j < n) edges.push_back({id(i, j), id(i, j + 1)});
            if (i < n && j < n) edges.push_back({id(i, j), id(i + 1, j + 1)});
        }
    const auto sub = subdivision_from_graph(pts, edges, 1e-9);
    const BoundingBox box{{-1, -1}, {5, 5}};
    for (std::uint64_t seed : {1u, 2u, 3u}) {
        const auto map = build_trapezoidal_map(sub, box, seed);
        CHECK(map_failures(sub, map, 3000, seed) == 0);
    }
    const auto map = build_trapezoidal_map(sub, box, 7);
    SUBCASE("points on edges go to the left face") {
        const FaceLocator loc(sub);
        const auto on_diag = trap_locate(map, {1.5, 1.5});
        CHECK(on_diag.on_boundary);
        CHECK(on_diag.cell == loc.locate({1.4, 1.6}));
        const auto on_vertical = trap_locate(map, {2, 0.5});
        CHECK(on_vertical.on_boundary);
        CHECK(on_vertical.cell == loc.locate({1.9, 0.5}));
        CHECK(trap_locate(map, {3, 3}).on_boundary);
    }
    SUBCASE("outside the box") {
        CHECK_THROWS_AS(trap_locate(map, {6, 0}), GeometryError);
        CHECK(trap_locate(map, {-0.5, 2}).cell == sub.unbounded_face);
    }
}

TEST_CASE("trapezoidal map on disk subdivisions") {
    for (int n : {2, 4, 6}) {
        const auto aug = disk_subdivision(random_disks(n, 50 + n));
        const auto map = build_trapezoidal_map(aug.C, aug.box, 42);
        CAPTURE(n);
        CHECK(map_failures(aug.C, map, 5000, n) == 0);
        CHECK(map.trapezoids <= 3 * aug.C.num_edges() + 1);
    }
}

TEST_CASE("map is deterministic in the seed") {
    const auto aug = disk_subdivision(random_disks(3, 5));
    CHECK(build_trapezoidal_map(aug.C, aug.box, 9) == build_trapezoidal_map(aug.C, aug.box, 9));
    CHECK_FALSE(build_trapezoidal_map(aug.C, aug.box, 9) == build_trapezoidal_map(aug.C, aug.box, 10));
}

TEST_CASE("locate agrees with the oracle") {
    const auto scenes = std::vector<std::vector<Curve>>{
        random_disks(5, 11),
        {make_parabola(0, 1, 0, 0, -1, 1), make_parabola(1, 0.5, 0, 0.2, -0.5, 0.5), make_segment(2, {-1, -1}, {1, -0.5})},
    };
    for (const auto& curves : scenes) {
        const auto idx = preprocess(curves, 3);
        std::mt19937_64 rng(8);
        const auto& b = idx.sub.box;
        std::uniform_real_distribution<double> ux(b.min.x, b.max.x), uy(b.min.y, b.max.y);
        int bad = 0, checked = 0;
        for (int i = 0; i < 4000; ++i) {
            const Point q{ux(rng), uy(rng)};
            const auto truth = sign_vector(curves, q, idx.sub.epsilon);
            if (has_on_flag(truth)) continue;
            const auto r = locate(idx, q, true);
            ++checked;
            if (r.signs != truth) ++bad;
        }
        CHECK(checked > 3000);
        CHECK(bad == 0);
    }
}

TEST_CASE("query outside the working box is the unbounded face") {
    const auto idx = preprocess({make_disk(0, {0, 0}, 1)}, 1);
    const auto r = locate(idx, {100, 100});
    CHECK(r.cell == -1);
    CHECK(r.signs == SignVector{Sign::Outside});
}
