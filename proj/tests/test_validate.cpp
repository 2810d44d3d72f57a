#include "doctest.h"

#include "curveloc/validate.hpp"

#include <random>

using namespace curveloc;

TEST_CASE("sign vectors") {
    const std::vector<Curve> disk{make_disk(0, {0, 0}, 1)};
    CHECK(sign_vector(disk, {0, 0}, 1e-9) == SignVector{Sign::Inside});
    CHECK(sign_vector(disk, {2, 0}, 1e-9) == SignVector{Sign::Outside});
    CHECK(sign_vector(disk, {1, 0}, 1e-9) == SignVector{Sign::On});
    const auto n = naive_locate({make_disk(0, {0, 0}, 1), make_disk(1, {1, 1}, 1), make_segment(2, {0, 0}, {1, 0})},
                                {0.5, 0.5}, 1e-9);
    CHECK(n.predicates == 3);
}

TEST_CASE("sign vectors are covariant under scaling and translation") {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(-5, 5);
    const std::vector<Curve> scene{make_disk(0, {0, 0}, 2), make_parabola(1, 0.5, 0, -1, -2, 2),
                                   make_segment(2, {-3, 1}, {3, 2})};
    const double s = 4;
    const Point t{3, -7};
    std::vector<Curve> moved{make_disk(0, t, 8), make_parabola(1, 0.5 / s, -2 * 0.5 / s * t.x, 0.5 / s * t.x * t.x - 4 + t.y,
                                                             -8 + t.x, 8 + t.x),
                             make_segment(2, Point{-12, 4} + t, Point{12, 8} + t)};
    for (int i = 0; i < 500; ++i) {
        const Point q{u(rng), u(rng)};
        const auto a = sign_vector(scene, q, 1e-9);
        if (has_on_flag(a)) continue;
        CHECK(a == sign_vector(moved, q * s + t, 1e-9 * s));
    }
}

TEST_CASE("trap method agrees with the oracle") {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> c(0, 6), r(0.5, 2);
    std::vector<Curve> disks;
    for (int i = 0; i < 4; ++i) disks.push_back(make_disk(i, {c(rng), c(rng)}, r(rng)));
    const auto idx = preprocess(disks, 1);
    const auto rep = validate_index(idx, Method::Trap, 2000, 9);
    CHECK(rep.ok());
    CHECK(rep.rate() == 1.0);
    CHECK(rep.face_identity_checked);
    CHECK(rep.checked() > 1900);

    const auto arcs = preprocess({make_parabola(0, 1, 0, 0, -1, 1), make_parabola(1, -1, 0, 3, -1, 1),
                                  make_segment(2, {-1, 1.2}, {1, 1.6})},
                                 2);
    CHECK(validate_index(arcs, Method::Trap, 2000, 4).ok());
}

TEST_CASE("corrupted list order is reported") {
    auto idx = preprocess({make_disk(0, {0, 0}, 2), make_disk(1, {1, 0.3}, 2), make_disk(2, {0.5, 1}, 1.5)}, 1);
    REQUIRE(validate_index(idx, Method::Trap, 3000, 2).ok());
    auto& sub = idx.sub;
    for (int c = 0; c < static_cast<int>(sub.C.faces.size()); ++c) {
        if (c != sub.C.unbounded_face && sub.chain_length(c) >= 2) {
            std::swap(sub.chain[sub.chain_start[c]], sub.chain[sub.chain_start[c] + 1]);
        }
    }
    const auto rep = validate_index(idx, Method::Trap, 3000, 2);
    CHECK(rep.rate() < 1.0);
    CHECK_FALSE(rep.mismatches.empty());
    CHECK(format_report(rep).find("mismatch x=") != std::string::npos);
}

TEST_CASE("landmark method is measured") {
    auto idx = preprocess({make_disk(0, {0, 0}, 1), make_disk(1, {3, 0}, 1)}, 1);
    CHECK_THROWS_AS(validate_index(idx, Method::Landmark, 10, 1), GeometryError);
    idx.landmarks = build_landmarks(idx.sub.C);
    const auto rep = validate_index(idx, Method::Landmark, 2000, 1);
    CHECK(rep.agreed + static_cast<int>(rep.mismatches.size()) == rep.checked());
    MESSAGE("landmark sign-vector agreement " << rep.rate());
}
