#pragma once
// Randomized incremental trapezoidal map over the straight cells, and the
// two-phase query: trapezoid search, then binary search of a crossing list.

#include "curveloc/landmark.hpp"
#include "curveloc/subdivision.hpp"

#include <cstdint>
#include <vector>

namespace curveloc {

class TrapezoidalMap {
public:
    enum class NodeKind : std::uint8_t { Leaf, X, Y };
    struct Node {
        NodeKind kind = NodeKind::Leaf;
        int value = -1;  // leaf: cell id; X: point id; Y: segment id
        int left = -1;   // X: lexicographically smaller side; Y: above
        int right = -1;  // X: larger side; Y: below
        friend bool operator==(const Node&, const Node&) = default;
    };

    std::vector<Node> nodes;          // root is node 0
    std::vector<Point> points;
    std::vector<std::array<int, 2>> segments;  // endpoint ids, lexicographic order
    BoundingBox box;
    std::uint64_t seed = 42;
    int trapezoids = 0;

    int depth() const;
    friend bool operator==(const TrapezoidalMap&, const TrapezoidalMap&) = default;
};

/// Builds the map over the edges of a straight-line subdivision; leaves carry
/// the face of `sub` containing the trapezoid. Insertion order is shuffled by seed.
TrapezoidalMap build_trapezoidal_map(const PlanarSubdivision& sub, const BoundingBox& box, std::uint64_t seed);

struct TrapLocation {
    int cell = -1;
    int comparisons = 0;
    bool on_boundary = false;
};

/// Throws OutsideWorkingBox when q is outside the map's box. Points on an edge
/// go to the face left of the edge directed from its smaller endpoint.
TrapLocation trap_locate(const TrapezoidalMap& map, const Point& q);

struct AugmentedIndex {
    friend bool operator==(const AugmentedIndex&, const AugmentedIndex&) = default;
    AugmentedSubdivision sub;
    TrapezoidalMap map;
    std::optional<LandmarkIndex> landmarks;
};

AugmentedIndex preprocess(const std::vector<Curve>& curves, std::uint64_t seed = 42, double epsilon = 0);

struct QueryResult {
    int face = -1;        // face of the arrangement A
    SignVector signs;
    int cell = -1;        // cell of C, -1 outside the working box
    int comparisons = 0;
    bool on_boundary = false;  // some evaluated curve predicate was within epsilon
};

/// With `debug`, every nonempty list of the cell is searched and required to
/// agree; disagreement throws AmbiguousOrder.
QueryResult locate(const AugmentedIndex& index, const Point& q, bool debug = false);

/// Second phase only: the list search inside a known cell of C.
QueryResult locate_in_cell(const AugmentedIndex& index, int cell, const Point& q, bool debug = false);

/// Query with the landmark index supplying the cell; throws InvalidInput when
/// the index has no landmarks.
QueryResult locate_landmark(const AugmentedIndex& index, const Point& q);

/// Searches the list of boundary half-edge h for q; returns the gap index.
int search_list(const AugmentedSubdivision& sub, int h, const Point& q, int& comparisons, bool& on_boundary);

}  // namespace curveloc
