#pragma once
// Landmark point location: a mirrored pair of points per edge, nearest
// neighbour search over them, and a k-way cluster tree for batches.

#include "curveloc/arrangement.hpp"

#include <cstdint>
#include <vector>

namespace curveloc {

struct Landmark {
    Point p;
    int face = -1;  // cell of the subdivision containing p
    int edge = -1;  // generating edge
    friend bool operator==(const Landmark&, const Landmark&) = default;
};

class LandmarkIndex {
public:
    std::vector<Landmark> landmarks;   // pairs are adjacent: 2i and 2i+1
    std::vector<double> pair_offset;   // per pair
    double offset_fraction = 0.25;
    int skipped_edges = 0;             // zero-length edges
    std::vector<int> kd_order;         // landmark ids in kd-tree layout

    int size() const { return static_cast<int>(landmarks.size()); }
    friend bool operator==(const LandmarkIndex&, const LandmarkIndex&) = default;
};

/// Places two landmarks per edge, mirrored across it at its midpoint with
/// offset offset_fraction * min(length, clearance).
LandmarkIndex build_landmarks(const PlanarSubdivision& C, double offset_fraction = 0.25);

/// Landmarks whose stored face differs from the locator's answer.
std::vector<int> mislabelled_landmarks(const PlanarSubdivision& C, const LandmarkIndex& idx);

struct LandmarkHit {
    int cell = -1;
    int landmark = -1;
    int comparisons = 0;  // distance evaluations
};

/// Cell of the nearest landmark; ties go to the lower landmark id.
LandmarkHit landmark_locate(const LandmarkIndex& idx, const Point& q);

class ClusterTree {
public:
    struct Node {
        Point centroid;
        BoundingBox box;
        std::vector<int> children;   // internal nodes
        std::vector<int> members;    // leaves: landmark ids
        friend bool operator==(const Node&, const Node&) = default;
    };

    int k = 2;
    std::uint64_t seed = 42;
    std::vector<Node> nodes;  // root is node 0

    int depth() const;
    int max_degree() const;
    friend bool operator==(const ClusterTree&, const ClusterTree&) = default;
};

/// Balanced k-means tree (cluster capacity ceil(m/k), 50 iterations).
/// Throws KTooLarge when k exceeds the landmark count, InvalidInput when k < 2.
ClusterTree build_cluster_tree(const LandmarkIndex& idx, int k, std::uint64_t seed = 42);

/// Nearest-landmark cells for a batch, routed through the cluster tree with
/// pruning by cluster boxes so every answer matches landmark_locate.
std::vector<int> batch_locate(const LandmarkIndex& idx, const ClusterTree& tree, const std::vector<Point>& queries);

}  // namespace curveloc
