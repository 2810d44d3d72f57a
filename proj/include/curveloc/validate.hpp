#pragma once
// Comparison of an index against brute-force classification.

#include "curveloc/point_location.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace curveloc {

enum class Method : std::uint8_t { Trap, Landmark };

const char* to_string(Method m);

struct Mismatch {
    Point q;
    SignVector expected;
    SignVector got;
    int face = -1;
};

struct ValidationReport {
    Method method = Method::Trap;
    int drawn = 0;       // sampled points
    int skipped_on = 0;  // within epsilon of some curve
    int agreed = 0;
    std::vector<Mismatch> mismatches;
    // Scenes of at most six curves also compare the face itself against a
    // direct lookup in A, since one sign vector can cover several faces.
    bool face_identity_checked = false;
    int face_identity_failures = 0;

    int checked() const { return drawn - skipped_on; }
    double rate() const { return checked() == 0 ? 1.0 : static_cast<double>(agreed) / checked(); }
    bool ok() const { return mismatches.empty() && face_identity_failures == 0; }
};

/// Uniform seeded samples over the working box; points with an on-flag are
/// skipped. epsilon <= 0 uses the scene epsilon.
ValidationReport validate_index(const AugmentedIndex& index, Method method, int num_samples, std::uint64_t seed,
                                double epsilon = 0);

std::string format_report(const ValidationReport& r);

}  // namespace curveloc
