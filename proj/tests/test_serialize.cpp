#include "doctest.h"

#include "curveloc/serialize.hpp"

using namespace curveloc;

namespace {

AugmentedIndex sample_index() {
    auto idx = preprocess({make_disk(0, {0, 0}, 1), make_disk(1, {1.5, 0.5}, 1), make_disk(2, {4, 1}, 0.7)}, 42);
    idx.landmarks = build_landmarks(idx.sub.C);
    idx.sub.stats.seconds = 0;
    return idx;
}

ErrorCode error_of(std::string_view bytes) {
    try {
        deserialize(bytes);
    } catch (const GeometryError& e) {
        return e.code();
    }
    return ErrorCode::InvalidInput;
}

}  // namespace

TEST_CASE("round trip") {
    const auto idx = sample_index();
    const std::string bytes = serialize(idx);
    CHECK(bytes.substr(0, 4) == "CVPL");
    const auto back = deserialize(bytes);
    CHECK(back == idx);
    CHECK(serialize(back) == bytes);

    SUBCASE("arc scene without landmarks") {
        auto arcs = preprocess({make_parabola(0, 1, 0, 0, -1, 1), make_segment(1, {-1, -1}, {1, -0.5})}, 7);
        arcs.sub.stats.seconds = 0;
        CHECK(deserialize(serialize(arcs)) == arcs);
    }
}

TEST_CASE("rebuild with the same seed is byte-identical") {
    CHECK(serialize(sample_index()) == serialize(sample_index()));
}

TEST_CASE("bad streams") {
    const std::string bytes = serialize(sample_index());
    CHECK(error_of(bytes.substr(0, bytes.size() / 2)) == ErrorCode::CorruptData);
    CHECK(error_of(bytes.substr(0, 5)) == ErrorCode::CorruptData);
    CHECK(error_of("XXXX") == ErrorCode::CorruptData);
    std::string v999 = bytes;
    v999[4] = static_cast<char>(999 & 0xff);
    v999[5] = static_cast<char>(999 >> 8);
    CHECK(error_of(v999) == ErrorCode::VersionMismatch);
    CHECK(error_of(bytes + "x") == ErrorCode::CorruptData);
    // Flip bytes throughout; every outcome must be a clean error or a valid index.
    for (std::size_t i = 6; i < bytes.size(); i += 97) {
        std::string b = bytes;
        b[i] = static_cast<char>(b[i] ^ 0x5a);
        try {
            deserialize(b);
        } catch (const GeometryError& e) {
            CHECK((e.code() == ErrorCode::CorruptData || e.code() == ErrorCode::VersionMismatch));
        }
    }
}
