#pragma once
// Geometric primitives for curve arrangements: points, boxes, input curves
// (segments, disk boundaries, vertical-axis parabola arcs) and their
// xy-monotone pieces.

#include <array>
#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace curveloc {

enum class ErrorCode {
    UnsupportedPair,
    NoSeparatingTangent,
    PointNotOnCurve,
    DegenerateOverlap,
    CurvedCell,
    OnBoundary,
    SeparationFailure,
    NonDisjointInput,
    AmbiguousOrder,
    OutsideWorkingBox,
    VersionMismatch,
    CorruptData,
    KTooLarge,
    InvalidInput,
    UnsupportedScene,
};

const char* to_string(ErrorCode code);

class GeometryError : public std::runtime_error {
public:
    GeometryError(ErrorCode code, const std::string& what)
        : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}
    ErrorCode code() const { return code_; }

private:
    ErrorCode code_;
};

struct Point {
    double x = 0.0;
    double y = 0.0;

    friend bool operator==(const Point&, const Point&) = default;
    Point operator+(const Point& o) const { return {x + o.x, y + o.y}; }
    Point operator-(const Point& o) const { return {x - o.x, y - o.y}; }
    Point operator*(double s) const { return {x * s, y * s}; }
};

inline double dot(const Point& a, const Point& b) { return a.x * b.x + a.y * b.y; }
inline double cross(const Point& a, const Point& b) { return a.x * b.y - a.y * b.x; }
inline double norm(const Point& a) { return std::hypot(a.x, a.y); }
inline double dist(const Point& a, const Point& b) { return norm(a - b); }
inline Point midpoint(const Point& a, const Point& b) { return {(a.x + b.x) / 2, (a.y + b.y) / 2}; }
inline bool is_finite(const Point& p) { return std::isfinite(p.x) && std::isfinite(p.y); }

/// Lexicographic (x, then y) order.
inline bool lex_less(const Point& a, const Point& b) {
    return a.x < b.x || (a.x == b.x && a.y < b.y);
}

/// Exact sign of the orientation determinant of (a, b, c):
/// +1 counter-clockwise, -1 clockwise, 0 collinear.
int orient2d(const Point& a, const Point& b, const Point& c);

struct BoundingBox {
    Point min{0, 0};
    Point max{0, 0};

    static BoundingBox empty();
    bool is_empty() const { return min.x > max.x || min.y > max.y; }
    void expand(const Point& p);
    void expand(const BoundingBox& b);
    bool contains(const Point& p, double tol = 0.0) const;
    bool intersects(const BoundingBox& b, double tol = 0.0) const;
    /// True when b lies inside this box (closed containment).
    bool encloses(const BoundingBox& b, double tol = 0.0) const;
    double width() const { return max.x - min.x; }
    double height() const { return max.y - min.y; }
    double diameter() const { return std::hypot(width(), height()); }
    BoundingBox inflated(double fraction) const;
    friend bool operator==(const BoundingBox&, const BoundingBox&) = default;
};

struct Segment {
    Point a;
    Point b;
    friend bool operator==(const Segment&, const Segment&) = default;
    double length() const { return dist(a, b); }
};

struct SegmentCurve {
    friend bool operator==(const SegmentCurve&, const SegmentCurve&) = default;
    Point a;
    Point b;
};

struct DiskCurve {
    friend bool operator==(const DiskCurve&, const DiskCurve&) = default;
    Point center;
    double radius = 1.0;
};

/// Graph of y = a x^2 + b x + c over [x_lo, x_hi].
struct ParabolaArc {
    friend bool operator==(const ParabolaArc&, const ParabolaArc&) = default;
    double a = 0, b = 0, c = 0;
    double x_lo = 0, x_hi = 1;
    double eval(double x) const { return (a * x + b) * x + c; }
    double slope(double x) const { return 2 * a * x + b; }
};

struct Curve {
    friend bool operator==(const Curve&, const Curve&) = default;
    int id = 0;
    std::variant<SegmentCurve, DiskCurve, ParabolaArc> shape;

    bool is_disk() const { return std::holds_alternative<DiskCurve>(shape); }
    /// Throws InvalidInput when an invariant is broken.
    void validate() const;
};

Curve make_segment(int id, Point a, Point b);
Curve make_disk(int id, Point center, double radius);
Curve make_parabola(int id, double a, double b, double c, double x_lo, double x_hi);

enum class Convexity { Convex, Concave, Linear };

/// Quarter arc of a circle between polar angles t0 < t1 inside one quadrant.
struct CircleArc {
    friend bool operator==(const CircleArc&, const CircleArc&) = default;
    Point center;
    double radius = 1.0;
    double t0 = 0, t1 = 0;
    int quadrant = 0;  // 0: upper-right, 1: upper-left, 2: lower-left, 3: lower-right
};

/// Parabola graph piece, monotone on [x_lo, x_hi] (vertex not interior).
struct GraphArc {
    friend bool operator==(const GraphArc&, const GraphArc&) = default;
    double a = 0, b = 0, c = 0;
    double x_lo = 0, x_hi = 0;
};

/// Straight piece; endpoints ordered lexicographically (a < b).
struct LinePiece {
    friend bool operator==(const LinePiece&, const LinePiece&) = default;
    Point a;
    Point b;
};

enum class PieceKind { Line, Graph, Circle };

/// xy-monotone, totally convex/concave fragment of an input curve.
/// Parameterization: Line t in [0,1], Graph t = x, Circle t = polar angle.
struct MonotonePiece {
    friend bool operator==(const MonotonePiece&, const MonotonePiece&) = default;
    int parent = 0;        // curve id
    int piece_index = 0;   // position within its parent's decomposition
    Convexity convexity = Convexity::Linear;
    std::variant<LinePiece, GraphArc, CircleArc> geometry;

    PieceKind kind() const { return static_cast<PieceKind>(geometry.index()); }
    double t_begin() const;
    double t_end() const;
    Point point_at(double t) const;
    /// Unit tangent in the direction of increasing t.
    Point tangent_at(double t) const;
    Point start() const { return point_at(t_begin()); }
    Point end() const { return point_at(t_end()); }
    /// Parameter of the point on the piece's supporting curve closest to p,
    /// clamped to the piece range.
    double project(const Point& p) const { return project(p, t_begin(), t_end()); }
    /// Same, restricted to the parameter sub-range [lo, hi].
    double project(const Point& p, double lo, double hi) const;
    /// Distance from p to the piece.
    double distance(const Point& p) const;
    /// Monotone pieces are y-monotone; returns x at height y when y is in range.
    std::optional<double> x_at_y(double y) const;
    /// Same for abscissa; vertical lines return nullopt.
    std::optional<double> y_at_x(double x) const;
};

enum class Side { Above, Below, On, OutsideSpan };
const char* to_string(Side s);

std::vector<MonotonePiece> monotone_decompose(const Curve& curve);

Side above_below(const MonotonePiece& piece, const Point& q, double epsilon);

/// Intersection points of two pieces of the same family (circle arcs, or
/// graph/line pieces). Shared endpoints are reported.
std::vector<Point> intersect_pieces(const MonotonePiece& p1, const MonotonePiece& p2, double epsilon);

/// Parameters along `piece` where it meets the closed segment s.
std::vector<double> intersect_piece_segment(const MonotonePiece& piece, const Segment& s, double epsilon);

/// Intersection of two closed segments. Collinear overlaps report the
/// endpoints of each segment lying on the other.
std::vector<Point> intersect_segments(const Segment& s1, const Segment& s2);

/// A common tangent line: the line clipped to the working box plus its
/// touching points on the two curves.
struct Tangent {
    Segment line;
    Point touch1;
    Point touch2;
    bool internal = false;
};

std::vector<Tangent> common_tangents(const Curve& c1, const Curve& c2, const BoundingBox& box);
std::vector<Tangent> common_tangents(const MonotonePiece& p1, const MonotonePiece& p2,
                                     const BoundingBox& box, double epsilon);

Segment tangent_line_at(const MonotonePiece& piece, const Point& p, const BoundingBox& box, double epsilon);

BoundingBox bounding_box(const MonotonePiece& piece);
BoundingBox bounding_box(const Curve& curve);

/// Clips the infinite line through p with direction d to the box.
std::optional<Segment> clip_line(const Point& p, const Point& d, const BoundingBox& box);

/// Scene-relative tolerance: 1e-9 times the diameter of the input box.
double scene_epsilon(const std::vector<Curve>& curves);

}  // namespace curveloc
