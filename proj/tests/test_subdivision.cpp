#include "doctest.h"

#include "curveloc/subdivision.hpp"

#include <random>

using namespace curveloc;

namespace {

// Walks to the cell of q and reads off its gap label from the first list.
SignVector label_of(const AugmentedSubdivision& aug, const Point& q) {
    const int cell = face_walk_locate(aug.C, q);
    if (cell == aug.C.unbounded_face) return aug.face_signs[aug.A.unbounded_face];
    const CrossingList l = aug.crossing_list(aug.cell_segments(cell).front());
    int k = 0;
    while (k < static_cast<int>(l.entries.size()) &&
           in_chain_set(aug.curves[l.entries[k].curve], l.entries[k], q).value_or(false)) {
        ++k;
    }
    return aug.face_signs[l.gap_faces[k]];
}

int agreement_failures(const AugmentedSubdivision& aug, int samples, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> ux(aug.box.min.x, aug.box.max.x), uy(aug.box.min.y, aug.box.max.y);
    int bad = 0;
    for (int i = 0; i < samples; ++i) {
        const Point q{ux(rng), uy(rng)};
        const SignVector truth = sign_vector(aug.curves, q, aug.epsilon);
        if (has_on_flag(truth)) continue;
        try {
            if (label_of(aug, q) != truth) ++bad;
        } catch (const GeometryError&) {
        }
    }
    return bad;
}

std::vector<Curve> random_disks(int n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> c(0, 10), r(0.5, 3);
    std::vector<Curve> out;
    for (int i = 0; i < n; ++i) out.push_back(make_disk(i, {c(rng), c(rng)}, r(rng)));
    return out;
}

}  // namespace

TEST_CASE("resolve_boxes") {
    const BoundingBox wb{{0, 0}, {10, 10}};
    SUBCASE("two disjoint boxes extend to the working box") {
        auto p1 = monotone_decompose(make_segment(0, {1, 1}, {2, 2}));
        auto p2 = monotone_decompose(make_segment(1, {5, 6}, {7, 8}));
        std::vector<MonotonePiece> pieces{p1[0], p2[0]};
        auto segs = resolve_boxes({bounding_box(p1[0]), bounding_box(p2[0])}, pieces, wb, 1e-9);
        CHECK(segs.size() == 8);
        for (const auto& s : segs) {
            const bool vertical = s.a.x == s.b.x;
            CHECK((vertical ? (s.a.y == 0 && s.b.y == 10) : (s.a.x == 0 && s.b.x == 10)));
        }
    }
    SUBCASE("nested box keeps its horizontal sides inside the outer box") {
        auto outer = monotone_decompose(make_parabola(0, 1, 0, 0, 0, 3))[0];
        auto inner = monotone_decompose(make_parabola(1, 0.5, 0, 2, 1, 2))[0];
        auto segs = resolve_boxes({bounding_box(outer), bounding_box(inner)}, {outer, inner}, wb, 1e-9);
        int clipped = 0;
        for (const auto& s : segs) {
            if (s.a.y == s.b.y && s.a.x == 0 && s.b.x == 3) ++clipped;
        }
        CHECK(clipped == 2);
    }
    SUBCASE("overlapping boxes of disjoint convex arcs get a tangent") {
        auto a = monotone_decompose(make_parabola(0, 1, 0, 0, 0, 2))[0];
        auto b = monotone_decompose(make_parabola(1, 2, -8, 9, 2, 3))[0];
        auto segs = resolve_boxes({bounding_box(a), bounding_box(b)}, {a, b}, wb, 1e-9);
        int tangents = 0;
        for (const auto& s : segs) tangents += (s.a.x != s.b.x && s.a.y != s.b.y);
        CHECK(tangents == 1);
    }
}

TEST_CASE("empty scene is a single cell") {
    auto aug = build_subdivision({});
    CHECK(aug.C.faces.size() == 2);
    CHECK(aug.chain.empty());
    CHECK(validate_dcel(aug.C).empty());
}

TEST_CASE("single disk") {
    auto aug = disk_subdivision({make_disk(0, {0, 0}, 1)});
    CHECK(validate_dcel(aug.C).empty());
    CHECK(validate_dcel(aug.A).empty());
    CHECK(aug.stats.max_cell_complexity <= 3);
    CHECK(label_of(aug, {0.2, 0.1}) == SignVector{Sign::Inside});
    CHECK(label_of(aug, {1.05, 0.05}) == SignVector{Sign::Outside});
    CHECK(verify_curve_monotone(aug, 100).empty());
}

TEST_CASE("two disjoint disks have four tangents") {
    auto aug = disk_subdivision({make_disk(0, {0, 0}, 1), make_disk(1, {5, 1}, 1.5)});
    CHECK(aug.tangents.size() == 4);
    CHECK(agreement_failures(aug, 2000, 3) == 0);
}

TEST_CASE("two intersecting disks") {
    auto aug = disk_subdivision({make_disk(0, {0, 0}, 2), make_disk(1, {2, 0.5}, 2)});
    CHECK(aug.A.faces.size() == 4);
    CHECK(validate_dcel(aug.C).empty());
    CHECK(verify_curve_monotone(aug, 100).empty());
    CHECK(agreement_failures(aug, 2000, 5) == 0);
}

TEST_CASE("random disk scenes agree with the oracle") {
    for (int n : {3, 5, 8}) {
        auto aug = disk_subdivision(random_disks(n, 100 + n));
        CAPTURE(n);
        CHECK(validate_dcel(aug.C).empty());
        CHECK(aug.stats.max_cell_complexity <= 3);
        CHECK(aug.stats.unresolved_cells == 0);
        CHECK(verify_curve_monotone(aug, 20).empty());
        CHECK(agreement_failures(aug, 3000, n) == 0);
    }
}

TEST_CASE("arc scenes") {
    SUBCASE("one parabola") {
        auto aug = curve_monotone_subdivision({make_parabola(0, 1, 0, 0, -1, 1)});
        CHECK(verify_curve_monotone(aug, 100).empty());
        CHECK(label_of(aug, {0.1, 0.6}) == SignVector{Sign::Above});
        CHECK(label_of(aug, {0.6, 0.1}) == SignVector{Sign::Below});
        CHECK(agreement_failures(aug, 1000, 1) == 0);
    }
    SUBCASE("nested convex arcs") {
        auto aug = curve_monotone_subdivision(
            {make_parabola(0, 1, 0, 0, -1, 1), make_parabola(1, 0.5, 0, 0.2, -0.5, 0.5)});
        CHECK(verify_curve_monotone(aug, 100).empty());
        CHECK(agreement_failures(aug, 2000, 2) == 0);
    }
    SUBCASE("arcs and segments") {
        auto aug = curve_monotone_subdivision({make_parabola(0, -0.5, 1, 0, -2, 2), make_segment(1, {-1, -3}, {2, -2}),
                                               make_parabola(2, 0.3, 0, 1, -1, 3)});
        CHECK(validate_dcel(aug.C).empty());
        CHECK(verify_curve_monotone(aug, 50).empty());
        CHECK(agreement_failures(aug, 3000, 4) == 0);
    }
    SUBCASE("intersecting arcs are rejected") {
        CHECK_THROWS_AS(curve_monotone_subdivision({make_parabola(0, 1, 0, 0, -1, 1), make_parabola(1, -1, 0, 0.5, -1, 1)}),
                        GeometryError);
    }
}

TEST_CASE("mixed scenes are unsupported") {
    try {
        build_subdivision({make_disk(0, {0, 0}, 1), make_segment(1, {0, 0}, {1, 1})});
        FAIL("expected an exception");
    } catch (const GeometryError& e) {
        CHECK(e.code() == ErrorCode::UnsupportedScene);
    }
}

TEST_CASE("shuffled list is caught by verification") {
    auto aug = disk_subdivision({make_disk(0, {0, 0}, 2), make_disk(1, {1, 0.3}, 2), make_disk(2, {0.5, 1}, 1.5)});
    REQUIRE(verify_curve_monotone(aug, 50).empty());
    bool changed = false;
    for (int c = 0; c < static_cast<int>(aug.C.faces.size()) && !changed; ++c) {
        if (c != aug.C.unbounded_face && aug.chain_length(c) >= 2) {
            std::swap(aug.chain[aug.chain_start[c]], aug.chain[aug.chain_start[c] + 1]);
            changed = true;
        }
    }
    REQUIRE(changed);
    CHECK_FALSE(verify_curve_monotone(aug, 200).empty());
}

TEST_CASE("crossing lists follow the gaps") {
    auto aug = disk_subdivision(random_disks(4, 9));
    for (int c = 0; c < static_cast<int>(aug.C.faces.size()); ++c) {
        if (c == aug.C.unbounded_face) continue;
        for (int h : aug.cell_segments(c)) {
            const auto l = aug.crossing_list(h);
            REQUIRE(l.gap_faces.size() == l.entries.size() + 1);
            // Neighbouring gaps differ exactly in the crossing curve.
            for (std::size_t i = 0; i < l.entries.size(); ++i) {
                const auto& a = aug.face_signs[l.gap_faces[i]];
                const auto& b = aug.face_signs[l.gap_faces[i + 1]];
                for (std::size_t k = 0; k < a.size(); ++k) {
                    CHECK((a[k] != b[k]) == (static_cast<int>(k) == l.entries[i].curve));
                }
            }
        }
    }
}

TEST_CASE("arcs far from the origin keep their parameters") {
    // Abscissas beyond 2*pi once wrapped like disk angles.
    const std::vector<Curve> curves{make_parabola(0, -0.56329207431630501, 7.8323128100961199, -26.514763491061483,
                                                  5.7774445692564056, 7.6203217629339539)};
    const auto aug = curve_monotone_subdivision(curves);
    CHECK(verify_curve_monotone(aug, 100).empty());
    CHECK(aug.stats.unresolved_cells == 0);
}

TEST_CASE("an arc through two cell corners is still seen") {
    const std::vector<Curve> curves{
        make_segment(0, {8.8042079235165573, 2.8810914302079604}, {2.6654716966996235, 4.3602658528732139}),
        make_parabola(1, -0.17700244133415494, 3.0722097078687023, -7.7303698990567629, 5.6620660082629506, 10),
        make_parabola(2, 0.56010379870384186, -4.5135900288083892, 11.193919974393484, 2.6956604347990649,
                      4.7838959994285313)};
    CHECK(verify_curve_monotone(curve_monotone_subdivision(curves), 100).empty());
}
