#pragma once
// Plain-text scene files and seeded scene generators.

#include "curveloc/subdivision.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace curveloc {

struct Scene {
    SceneKind kind = SceneKind::Disks;
    std::vector<Curve> curves;  // ids are 0..n-1 in file order
    std::optional<double> epsilon;
};

/// Grammar (one record per line, '#' starts a comment):
///   type disks|arcs
///   epsilon <e>
///   disk <cx> <cy> <r>
///   arc <a> <b> <c> <x_lo> <x_hi>
///   segment <x1> <y1> <x2> <y2>
/// Throws InvalidInput with the line number, UnsupportedScene when disks are
/// mixed with arcs or segments.
Scene parse_scene(std::string_view text);
Scene load_scene(const std::string& path);
std::string format_scene(const Scene& scene);

/// n disks, centers uniform in [0,10]^2, radii uniform in [0.3,1.5].
std::vector<Curve> random_disks(int n, std::uint64_t seed);

/// n pairwise disjoint disks in general position (rejection sampling).
std::vector<Curve> random_disjoint_disks(int n, std::uint64_t seed);

/// n pairwise disjoint parabola arcs and segments in [0,10]^2.
std::vector<Curve> random_arcs(int n, std::uint64_t seed);

}  // namespace curveloc
