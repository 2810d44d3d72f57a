#pragma once
// Curve-monotone polygonal subdivisions of disk and arc scenes, with the
// per-cell ordered lists of crossing curves.

#include "curveloc/arrangement.hpp"
#include "curveloc/oracle.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace curveloc {

enum class SceneKind : std::uint8_t { Disks, Arcs };

const char* to_string(SceneKind k);

struct BuildStats {
    friend bool operator==(const BuildStats&, const BuildStats&) = default;
    double seconds = 0;            // T
    long long size = 0;            // S: |C| vertices + edges + faces + total list length
    int max_cell_complexity = 0;   // C_max
    int cells = 0;
    long long list_entries = 0;    // sum over (segment, cell) lists
    int bisections = 0;
    int unresolved_cells = 0;      // cells still failing the chain test at the depth cap
};

/// One crossing curve of a cell. The chain set of the entry is the part of
/// the cell on the curve's Inside/Above side when `positive`, else the rest.
struct ListEntry {
    friend bool operator==(const ListEntry&, const ListEntry&) = default;
    int curve = -1;  // index into the scene's curves
    int piece = -1;  // a piece of that curve crossing the cell
    bool positive = true;
};

/// Curves crossing `cell`, ordered away from boundary segment `segment`:
/// the chain sets shrink along the list, gap i lies between entries i-1 and i.
struct CrossingList {
    int segment = -1;
    int cell = -1;
    std::vector<ListEntry> entries;
    std::vector<int> gap_faces;  // faces of A, entries.size() + 1 of them
};

struct AugmentedSubdivision {
    friend bool operator==(const AugmentedSubdivision&, const AugmentedSubdivision&) = default;
    SceneKind kind = SceneKind::Disks;
    std::vector<Curve> curves;
    std::vector<MonotonePiece> pieces;
    double epsilon = 1e-9;
    BoundingBox box;           // working box
    PlanarSubdivision C;       // straight-line cells
    PlanarSubdivision A;       // true arrangement (plus walls and box for arc scenes)
    std::vector<SignVector> face_signs;  // per face of A
    std::vector<Segment> tangents;       // mutual tangent segments inserted into C

    // Each cell stores one chain; the list of (segment, cell) is that chain,
    // reversed when the segment's half-edge is flagged.
    std::vector<int> chain_start;        // per cell of C, plus a sentinel
    std::vector<ListEntry> chain;
    std::vector<int> gaps;               // A faces, chain_start[c] + c indexing
    std::vector<std::uint8_t> reversed;  // per half-edge of C
    BuildStats stats;

    int chain_length(int cell) const { return chain_start[cell + 1] - chain_start[cell]; }
    const ListEntry& entry(int cell, int i) const { return chain[chain_start[cell] + i]; }
    int gap_face(int cell, int i) const { return gaps[chain_start[cell] + cell + i]; }
    /// The list of boundary half-edge h of its cell.
    CrossingList crossing_list(int h) const;
    /// Boundary half-edges of a cell, ascending by segment id.
    std::vector<int> cell_segments(int cell) const;
};

/// True when q is in the chain set of the entry; nullopt when q is on the curve.
std::optional<bool> in_chain_set(const Curve& curve, const ListEntry& e, const Point& q);

/// Extended box edges and separating tangents for the given piece boxes.
/// Intersecting pairs are handled first, then disjoint, then nested pairs.
std::vector<Segment> resolve_boxes(const std::vector<BoundingBox>& boxes,
                                   const std::vector<MonotonePiece>& pieces,
                                   const BoundingBox& working_box, double epsilon);

// epsilon <= 0 derives the scene tolerance from the input bounding box.

/// Scenes of pairwise disjoint parabola arcs and segments.
AugmentedSubdivision curve_monotone_subdivision(const std::vector<Curve>& curves, double epsilon = 0);

/// Scenes of disks with distinct centers.
AugmentedSubdivision disk_subdivision(const std::vector<Curve>& disks, double epsilon = 0);

/// Dispatches on the scene type; throws UnsupportedScene on mixed input.
AugmentedSubdivision build_subdivision(const std::vector<Curve>& curves, double epsilon = 0);

/// Recomputes every cell's chain for the current C and A.
/// Throws AmbiguousOrder when a cell has no valid order.
void build_crossing_lists(AugmentedSubdivision& aug);

/// Samples each cell and checks that list order and gap labels agree with
/// direct classification. Returns one line per failing cell.
std::vector<std::string> verify_curve_monotone(const AugmentedSubdivision& aug, int samples_per_cell,
                                               std::uint64_t seed = 1);

/// Working box of a scene: input bounding box inflated by 10%.
BoundingBox working_box(const std::vector<Curve>& curves);

SceneKind scene_kind(const std::vector<Curve>& curves);

}  // namespace curveloc
