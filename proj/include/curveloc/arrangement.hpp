#pragma once
// Doubly connected edge list for arrangements of monotone pieces and for
// straight-line subdivisions, with triangulation and structural checks.

#include "curveloc/geometry.hpp"

#include <string>
#include <utility>
#include <vector>

namespace curveloc {

/// Geometry of edge k (half-edge 2k runs from t_from to t_to).
/// piece < 0 marks a straight edge between the two vertices.
struct EdgeArc {
    friend bool operator==(const EdgeArc&, const EdgeArc&) = default;
    int piece = -1;
    double t_from = 0;
    double t_to = 0;
};

class PlanarSubdivision {
public:
    friend bool operator==(const PlanarSubdivision&, const PlanarSubdivision&) = default;
    struct Vertex {
        friend bool operator==(const Vertex&, const Vertex&) = default;
        Point p;
        int half_edge = -1;  // some outgoing half-edge, -1 when isolated
    };
    struct HalfEdge {
        friend bool operator==(const HalfEdge&, const HalfEdge&) = default;
        int origin = -1;
        int twin = -1;
        int next = -1;
        int prev = -1;
        int face = -1;
    };
    struct Face {
        friend bool operator==(const Face&, const Face&) = default;
        int outer = -1;          // a half-edge of the outer cycle, -1 for the unbounded face
        std::vector<int> inner;  // one half-edge per inner boundary cycle
    };

    std::vector<Vertex> vertices;
    std::vector<HalfEdge> half_edges;
    std::vector<Face> faces;
    std::vector<MonotonePiece> pieces;  // referenced by curved edges
    std::vector<EdgeArc> arcs;          // per edge; empty for straight-only subdivisions
    int unbounded_face = 0;
    double epsilon = 1e-9;

    int num_edges() const { return static_cast<int>(half_edges.size() / 2); }
    int dest(int h) const { return half_edges[half_edges[h].twin].origin; }
    bool is_straight(int h) const { return arcs.empty() || arcs[h / 2].piece < 0; }
    const Point& origin_point(int h) const { return vertices[half_edges[h].origin].p; }
    const Point& dest_point(int h) const { return vertices[dest(h)].p; }

    /// Piece parameters of the half-edge's start and end.
    std::pair<double, double> param_range(int h) const;
    /// Point at fraction s in [0,1] along the half-edge.
    Point eval(int h, double s) const;
    /// Unit direction in which the half-edge leaves its origin.
    Point direction_out(int h) const;
    /// Distance from p to edge h/2, optionally reporting the fraction along h.
    double distance(int h, const Point& p, double* fraction = nullptr) const;
    /// Contribution of the half-edge to twice the signed area of its cycle,
    /// measured about `origin`.
    double area_term(int h, const Point& origin = {0, 0}) const;

    std::vector<int> cycle(int h) const;
    /// Vertex ids of the outer boundary cycle of a bounded face.
    std::vector<int> outer_vertices(int f) const;
    /// Number of boundary half-edges (outer and inner cycles).
    int face_complexity(int f) const;
    BoundingBox bounds() const;
};

/// Arrangement of monotone pieces and straight segments. Vertices are piece
/// endpoints and pairwise intersections (snapped within epsilon).
PlanarSubdivision build_arrangement(const std::vector<MonotonePiece>& pieces,
                                    const std::vector<Segment>& extra_segments, double epsilon);

/// Straight-line subdivision from an explicit non-crossing graph.
PlanarSubdivision subdivision_from_graph(std::vector<Point> points,
                                         const std::vector<std::pair<int, int>>& edges, double epsilon);

/// Triangulates every bounded face with more than max_sides boundary segments.
PlanarSubdivision triangulate_cells(const PlanarSubdivision& sub, int max_sides);

/// Ear-clipping triangulation of the given bounded face (outer boundary plus
/// holes joined by bridges). Returns triangles as vertex-id triples.
std::vector<std::array<int, 3>> triangulate_face(const PlanarSubdivision& sub, int face);

/// Linear-time reference locator (crossing-number test per face).
/// Throws OnBoundary when q is within epsilon of an edge.
int face_walk_locate(const PlanarSubdivision& sub, const Point& q);

/// Lists violated DCEL invariants; empty when valid.
std::vector<std::string> validate_dcel(const PlanarSubdivision& sub);

/// Number of connected components of the edge graph (isolated vertices count).
int connected_components(const PlanarSubdivision& sub);

/// Nearest-edge face locator backed by a uniform grid over edge boxes.
class FaceLocator {
public:
    explicit FaceLocator(const PlanarSubdivision& sub);
    int locate(const Point& p) const;

private:
    const PlanarSubdivision* sub_;
    BoundingBox box_;
    int nx_ = 1, ny_ = 1;
    double cell_w_ = 1, cell_h_ = 1;
    std::vector<int> cell_start_;
    std::vector<int> cell_edges_;
    int cell_x(double x) const;
    int cell_y(double y) const;
};

}  // namespace curveloc
