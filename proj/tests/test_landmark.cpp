#include "doctest.h"

#include "curveloc/landmark.hpp"
#include "curveloc/point_location.hpp"

#include <cmath>
#include <random>

using namespace curveloc;

namespace {

PlanarSubdivision unit_square() {
    return subdivision_from_graph({{0, 0}, {1, 0}, {1, 1}, {0, 1}}, {{0, 1}, {1, 2}, {2, 3}, {3, 0}}, 1e-9);
}

std::vector<Point> random_points(const BoundingBox& b, int n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> ux(b.min.x, b.max.x), uy(b.min.y, b.max.y);
    std::vector<Point> out;
    for (int i = 0; i < n; ++i) out.push_back({ux(rng), uy(rng)});
    return out;
}

}  // namespace

TEST_CASE("two landmarks per edge") {
    const auto sq = unit_square();
    const auto idx = build_landmarks(sq);
    CHECK(idx.size() == 2 * sq.num_edges());
    CHECK(mislabelled_landmarks(sq, idx).empty());
    for (int i = 0; i < idx.size(); i += 2) {
        const auto& a = idx.landmarks[i];
        const auto& b = idx.landmarks[i + 1];
        REQUIRE(a.edge == b.edge);
        const Point u = sq.origin_point(2 * a.edge), v = sq.dest_point(2 * a.edge);
        // The edge is the perpendicular bisector of the pair.
        CHECK(std::abs(dist(u, a.p) - dist(u, b.p)) < 1e-12);
        CHECK(std::abs(dist(v, a.p) - dist(v, b.p)) < 1e-12);
        CHECK(std::abs(dot(a.p - b.p, v - u)) < 1e-12);
    }
}

TEST_CASE("nearest landmark") {
    const auto sq = unit_square();
    const auto idx = build_landmarks(sq);
    for (int i = 0; i < idx.size(); ++i) {
        const auto hit = landmark_locate(idx, idx.landmarks[i].p);
        CHECK(hit.landmark == i);
        CHECK(hit.cell == idx.landmarks[i].face);
    }
    // A point on an edge is equidistant to its pair; the lower id wins.
    const auto hit = landmark_locate(idx, {0.5, 0});
    CHECK(hit.landmark % 2 == 0);
    CHECK(landmark_locate(idx, {0.5, 0.5}).cell != sq.unbounded_face);
}

TEST_CASE("kd search matches a linear scan") {
    const auto aug = disk_subdivision({make_disk(0, {0, 0}, 1), make_disk(1, {1.5, 0.2}, 0.8), make_disk(2, {0.4, 2}, 0.6)});
    const auto idx = build_landmarks(aug.C);
    CHECK(idx.size() == 2 * aug.C.num_edges());
    CHECK(mislabelled_landmarks(aug.C, idx).empty());
    for (const Point& q : random_points(aug.box, 500, 4)) {
        int best = 0;
        for (int i = 1; i < idx.size(); ++i) {
            const double d = dist(idx.landmarks[i].p, q), db = dist(idx.landmarks[best].p, q);
            if (d < db) best = i;
        }
        CHECK(landmark_locate(idx, q).landmark == best);
    }
}

TEST_CASE("cluster tree bounds") {
    const auto aug = disk_subdivision({make_disk(0, {0, 0}, 1), make_disk(1, {3, 1}, 1)});
    const auto idx = build_landmarks(aug.C);
    const int m = idx.size();
    for (int k : {2, 4, 8}) {
        const auto tree = build_cluster_tree(idx, k, 7);
        CAPTURE(k);
        CHECK(tree.max_degree() <= k + 1);
        CHECK(tree.depth() <= static_cast<int>(std::ceil(std::log(m) / std::log(k))) + 1);
        std::vector<int> seen(m, 0);
        for (const auto& n : tree.nodes)
            for (int id : n.members) ++seen[id];
        CHECK(std::all_of(seen.begin(), seen.end(), [](int s) { return s == 1; }));
        CHECK(tree == build_cluster_tree(idx, k, 7));
    }
    SUBCASE("sixteen landmarks with k = 4") {
        LandmarkIndex small;
        for (int i = 0; i < 16; ++i) small.landmarks.push_back({{double(i % 4), double(i / 4)}, 0, i / 2});
        CHECK(build_cluster_tree(small, 4, 1).depth() <= 3);
    }
    CHECK_THROWS_AS(build_cluster_tree(idx, m + 1, 1), GeometryError);
}

TEST_CASE("batch queries equal single queries") {
    const auto aug = disk_subdivision({make_disk(0, {0, 0}, 1), make_disk(1, {1.2, 0.5}, 1), make_disk(2, {3, 3}, 0.5)});
    const auto idx = build_landmarks(aug.C);
    const auto queries = random_points(aug.box, 1000, 11);
    for (int k : {2, 4, 8}) {
        const auto tree = build_cluster_tree(idx, k, 3);
        const auto cells = batch_locate(idx, tree, queries);
        REQUIRE(cells.size() == queries.size());
        int diff = 0;
        for (std::size_t i = 0; i < queries.size(); ++i) diff += cells[i] != landmark_locate(idx, queries[i]).cell;
        CHECK(diff == 0);
    }
    const auto tree = build_cluster_tree(idx, 4, 3);
    CHECK(batch_locate(idx, tree, {}).empty());
    CHECK(batch_locate(idx, tree, {queries[0]}).front() == landmark_locate(idx, queries[0]).cell);
}

TEST_CASE("landmark agreement with the trapezoidal map") {
    const auto aug = disk_subdivision({make_disk(0, {0, 0}, 1), make_disk(1, {1.2, 0.5}, 1), make_disk(2, {3, 3}, 0.5)});
    const auto map = build_trapezoidal_map(aug.C, aug.box, 1);
    const auto idx = build_landmarks(aug.C);
    int agree = 0;
    const auto queries = random_points(aug.box, 5000, 2);
    for (const Point& q : queries) agree += landmark_locate(idx, q).cell == trap_locate(map, q).cell;
    MESSAGE("landmark agreement " << agree << " / " << queries.size());
    CHECK(agree > 0);
}
