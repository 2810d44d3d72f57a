#include "curveloc/arrangement.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <set>
#include <unordered_map>

namespace curveloc {

namespace {

struct RawEdge {
    int u = -1;
    int v = -1;
    EdgeArc arc;
};

// Snaps points within epsilon onto the first-seen representative.
class VertexTable {
public:
    VertexTable(std::vector<PlanarSubdivision::Vertex>& out, double eps)
        : out_(out), eps_(eps), cell_(std::max(eps, 1e-300) * 4) {}

    int insert(const Point& p) {
        const long long cx = key(p.x), cy = key(p.y);
        for (long long dx = -1; dx <= 1; ++dx) {
            for (long long dy = -1; dy <= 1; ++dy) {
                auto it = grid_.find(hash(cx + dx, cy + dy));
                if (it == grid_.end()) continue;
                for (int id : it->second) {
                    if (dist(out_[id].p, p) <= eps_) return id;
                }
            }
        }
        const int id = static_cast<int>(out_.size());
        out_.push_back({p, -1});
        grid_[hash(cx, cy)].push_back(id);
        return id;
    }

private:
    long long key(double v) const { return static_cast<long long>(std::floor(v / cell_)); }
    static unsigned long long hash(long long a, long long b) {
        return static_cast<unsigned long long>(a) * 0x9E3779B97F4A7C15ULL ^ static_cast<unsigned long long>(b);
    }
    std::vector<PlanarSubdivision::Vertex>& out_;
    double eps_;
    double cell_;
    std::unordered_map<unsigned long long, std::vector<int>> grid_;
};

int half_plane(const Point& d) { return (d.y < 0 || (d.y == 0 && d.x < 0)) ? 1 : 0; }

double angle_of(const Point& d) {
    double a = std::atan2(d.y, d.x);
    if (a < 0) a += 2 * std::numbers::pi;
    return a;
}

// Outgoing half-edges of v in counter-clockwise order, starting anywhere.
std::vector<int> outgoing(const PlanarSubdivision& sub, int v) {
    std::vector<int> out;
    const int start = sub.vertices[v].half_edge;
    if (start < 0) return out;
    int h = start;
    do {
        out.push_back(h);
        h = sub.half_edges[sub.half_edges[h].prev].twin;
    } while (h != start && out.size() <= sub.half_edges.size());
    return out;
}

// Direction from the origin of h to the point of h at distance r from it.
// Distance from an endpoint grows along a monotone piece, so bisection finds it.
Point direction_at_radius(const PlanarSubdivision& sub, int h, double r) {
    const Point& o = sub.origin_point(h);
    if (sub.is_straight(h) || r <= 0) return sub.direction_out(h);
    if (dist(sub.dest_point(h), o) <= r) return sub.dest_point(h) - o;
    double lo = 0, hi = 1;
    for (int i = 0; i < 60; ++i) {
        const double mid = 0.5 * (lo + hi);
        (dist(sub.eval(h, mid), o) < r ? lo : hi) = mid;
    }
    const Point d = sub.eval(h, hi) - o;
    return d == Point{0, 0} ? sub.direction_out(h) : d;
}

// Face incident to v in the angular sector containing p. Curved edges are
// compared where they cross the circle through p around v.
int face_in_sector(const PlanarSubdivision& sub, int v, const Point& p) {
    const Point dir = p - sub.vertices[v].p;
    const double a = angle_of(dir), r = norm(dir);
    int best = -1;
    double best_gap = std::numeric_limits<double>::infinity();
    for (int h : outgoing(sub, v)) {
        double gap = a - angle_of(direction_at_radius(sub, h, r));
        if (gap < 0) gap += 2 * std::numbers::pi;
        if (gap < best_gap) best_gap = gap, best = h;
    }
    return best < 0 ? sub.unbounded_face : sub.half_edges[best].face;
}

// Rightward ray from p: crossing parity against one boundary cycle.
bool point_in_cycle(const PlanarSubdivision& sub, int rep, const Point& p) {
    bool inside = false;
    int h = rep;
    do {
        const Point& a = sub.origin_point(h);
        const Point& b = sub.dest_point(h);
        if ((a.y <= p.y) != (b.y <= p.y)) {
            double x;
            if (sub.is_straight(h)) {
                x = a.x + (b.x - a.x) * (p.y - a.y) / (b.y - a.y);
            } else {
                const auto& piece = sub.pieces[sub.arcs[h / 2].piece];
                x = piece.x_at_y(p.y).value_or(0.5 * (a.x + b.x));
            }
            if (x > p.x) inside = !inside;
        }
        h = sub.half_edges[h].next;
    } while (h != rep);
    return inside;
}

// Direction-with-tiebreak comparator for sorting edges around a vertex.
struct AngularKey {
    Point dir;     // primary direction (exact vector for straight edges)
    Point chord;   // secondary direction a short way along the edge
    bool straight;
    int dest;
};

void assemble(PlanarSubdivision& sub, std::vector<RawEdge> edges) {
    const int m = static_cast<int>(edges.size());
    const bool curved = std::any_of(edges.begin(), edges.end(), [](const RawEdge& e) { return e.arc.piece >= 0; });
    sub.half_edges.assign(2 * static_cast<std::size_t>(m), {});
    sub.arcs.clear();
    if (curved) sub.arcs.resize(m);
    for (int k = 0; k < m; ++k) {
        sub.half_edges[2 * k] = {edges[k].u, 2 * k + 1, -1, -1, -1};
        sub.half_edges[2 * k + 1] = {edges[k].v, 2 * k, -1, -1, -1};
        if (curved) sub.arcs[k] = edges[k].arc;
    }
    edges.clear();
    edges.shrink_to_fit();

    // Bucket outgoing half-edges per vertex.
    const int nv = static_cast<int>(sub.vertices.size());
    std::vector<int> start(nv + 1, 0);
    for (const auto& he : sub.half_edges) ++start[he.origin + 1];
    for (int v = 0; v < nv; ++v) start[v + 1] += start[v];
    std::vector<int> order(sub.half_edges.size());
    {
        std::vector<int> fill(start.begin(), start.end() - 1);
        for (int h = 0; h < static_cast<int>(sub.half_edges.size()); ++h) order[fill[sub.half_edges[h].origin]++] = h;
    }

    std::vector<AngularKey> keys;
    std::vector<int> idx;
    for (int v = 0; v < nv; ++v) {
        const int lo = start[v], hi = start[v + 1];
        if (lo == hi) {
            sub.vertices[v].half_edge = -1;
            continue;
        }
        keys.clear();
        idx.resize(hi - lo);
        for (int i = lo; i < hi; ++i) {
            const int h = order[i];
            AngularKey k;
            k.straight = sub.is_straight(h);
            k.dest = sub.dest(h);
            if (k.straight) {
                k.dir = sub.dest_point(h) - sub.vertices[v].p;
                k.chord = k.dir;
            } else {
                k.dir = sub.direction_out(h);
                k.chord = sub.eval(h, 1e-4) - sub.vertices[v].p;
            }
            keys.push_back(k);
        }
        std::iota(idx.begin(), idx.end(), 0);
        const Point& origin = sub.vertices[v].p;
        std::sort(idx.begin(), idx.end(), [&](int i, int j) {
            const AngularKey& a = keys[i];
            const AngularKey& b = keys[j];
            const int ha = half_plane(a.dir), hb = half_plane(b.dir);
            if (ha != hb) return ha < hb;
            if (a.straight && b.straight) {
                const int o = orient2d(origin, sub.vertices[a.dest].p, sub.vertices[b.dest].p);
                if (o != 0) return o > 0;
                return i < j;
            }
            const double c = cross(a.dir * (1.0 / norm(a.dir)), b.dir * (1.0 / norm(b.dir)));
            if (std::abs(c) > 1e-12) return c > 0;
            const double c2 = cross(a.chord, b.chord);
            if (c2 != 0) return c2 > 0;
            return i < j;
        });
        const int k = hi - lo;
        for (int i = 0; i < k; ++i) {
            const int h = order[lo + idx[i]];
            const int cw = order[lo + idx[(i - 1 + k) % k]];
            const int t = sub.half_edges[h].twin;
            sub.half_edges[t].next = cw;
            sub.half_edges[cw].prev = t;
        }
        sub.vertices[v].half_edge = order[lo + idx[0]];
    }

    // Trace boundary cycles.
    struct Cycle {
        int rep;
        double area2;
    };
    std::vector<Cycle> cycles;
    std::vector<int> cycle_of(sub.half_edges.size(), -1);
    for (int h = 0; h < static_cast<int>(sub.half_edges.size()); ++h) {
        if (cycle_of[h] >= 0) continue;
        const int cid = static_cast<int>(cycles.size());
        double sum = 0, mag = 0;
        const Point o = sub.origin_point(h);
        int e = h;
        do {
            cycle_of[e] = cid;
            const double t = sub.area_term(e, o);
            sum += t;
            mag += std::abs(t);
            e = sub.half_edges[e].next;
        } while (e != h);
        const double tol = 64 * std::numeric_limits<double>::epsilon() * mag;
        cycles.push_back({h, sum > tol ? sum : 0.0});
    }

    sub.faces.clear();
    sub.faces.push_back({});  // unbounded face
    sub.unbounded_face = 0;
    std::vector<int> face_of_cycle(cycles.size(), -1);
    for (std::size_t c = 0; c < cycles.size(); ++c) {
        if (cycles[c].area2 > 0) {
            face_of_cycle[c] = static_cast<int>(sub.faces.size());
            sub.faces.push_back({cycles[c].rep, {}});
        }
    }
    for (std::size_t c = 0; c < cycles.size(); ++c) {
        if (face_of_cycle[c] < 0) continue;
        int e = cycles[c].rep;
        do {
            sub.half_edges[e].face = face_of_cycle[c];
            e = sub.half_edges[e].next;
        } while (e != cycles[c].rep);
    }

    // Hole cycles: shoot a ray rightwards from the component's rightmost vertex
    // and take the face on the left of the upward-moving edge that is hit first.
    std::vector<std::size_t> holes;
    for (std::size_t c = 0; c < cycles.size(); ++c) {
        if (face_of_cycle[c] < 0) holes.push_back(c);
    }
    if (!holes.empty()) {
        // Components, so a hole never hits itself.
        std::vector<int> comp(nv);
        std::iota(comp.begin(), comp.end(), 0);
        auto find = [&](int x) {
            while (comp[x] != x) x = comp[x] = comp[comp[x]];
            return x;
        };
        for (int k = 0; k < m; ++k) {
            const int a = find(sub.half_edges[2 * k].origin), b = find(sub.half_edges[2 * k + 1].origin);
            if (a != b) comp[a] = b;
        }
        // Row buckets over edge y-ranges.
        const BoundingBox box = sub.bounds();
        const int rows = std::max(1, std::min(4096, m / 8));
        const double rh = std::max(box.height(), 1e-300) / rows;
        auto row_of = [&](double y) { return std::clamp(static_cast<int>((y - box.min.y) / rh), 0, rows - 1); };
        std::vector<std::vector<int>> bucket(rows);
        for (int k = 0; k < m; ++k) {
            const double y0 = sub.origin_point(2 * k).y, y1 = sub.dest_point(2 * k).y;
            for (int r = row_of(std::min(y0, y1)); r <= row_of(std::max(y0, y1)); ++r) bucket[r].push_back(k);
        }
        // Resolve holes in order of their enclosing depth is unnecessary: the
        // first hit edge belongs to a cycle whose face is already known or is
        // itself a hole; iterate until stable.
        std::vector<int> hole_face(holes.size(), -2);
        std::vector<int> pending_edge(holes.size(), -1);
        for (std::size_t i = 0; i < holes.size(); ++i) {
            // Rightmost vertex of the hole cycle.
            int e = cycles[holes[i]].rep, best = e;
            do {
                const Point& p = sub.origin_point(e);
                const Point& b = sub.origin_point(best);
                if (p.x > b.x || (p.x == b.x && p.y > b.y)) best = e;
                e = sub.half_edges[e].next;
            } while (e != cycles[holes[i]].rep);
            const int v = sub.half_edges[best].origin;
            const Point p = sub.vertices[v].p;
            const int my = find(v);
            double best_x = std::numeric_limits<double>::infinity();
            int hit_edge = -1;
            double hit_frac = 0;
            for (int k : bucket[row_of(p.y)]) {
                if (find(sub.half_edges[2 * k].origin) == my) continue;
                const Point& a = sub.origin_point(2 * k);
                const Point& b = sub.dest_point(2 * k);
                if (std::min(a.y, b.y) > p.y || std::max(a.y, b.y) < p.y) continue;
                double x;
                if (a.y == b.y) {
                    if (std::max(a.x, b.x) < p.x) continue;
                    x = std::max(std::min(a.x, b.x), p.x);
                } else if (sub.is_straight(2 * k)) {
                    x = a.x + (b.x - a.x) * (p.y - a.y) / (b.y - a.y);
                } else {
                    x = sub.pieces[sub.arcs[k].piece].x_at_y(p.y).value_or(0.5 * (a.x + b.x));
                }
                if (x <= p.x || x >= best_x) continue;
                best_x = x;
                hit_edge = k;
                hit_frac = (a.y == b.y) ? 0.5 : (p.y - a.y) / (b.y - a.y);
            }
            if (hit_edge < 0) {
                hole_face[i] = sub.unbounded_face;
                continue;
            }
            const Point hit{best_x, p.y};
            const Point& a = sub.origin_point(2 * hit_edge);
            const Point& b = sub.dest_point(2 * hit_edge);
            int side_he;
            if (dist(hit, a) <= sub.epsilon || dist(hit, b) <= sub.epsilon) {
                const int hv = dist(hit, a) <= dist(hit, b) ? sub.half_edges[2 * hit_edge].origin
                                                            : sub.half_edges[2 * hit_edge + 1].origin;
                // Sector at the hit vertex facing back towards p.
                const double ang = angle_of({-1, 0});
                int bh = -1;
                double bg = std::numeric_limits<double>::infinity();
                for (int h : outgoing(sub, hv)) {
                    double gap = ang - angle_of(sub.direction_out(h));
                    if (gap < 0) gap += 2 * std::numbers::pi;
                    if (gap < bg) bg = gap, bh = h;
                }
                side_he = bh;
            } else {
                // Upward-moving half-edge has the hole on its left.
                Point tan;
                if (sub.is_straight(2 * hit_edge)) {
                    tan = b - a;
                } else {
                    const double f = std::clamp(hit_frac, 0.0, 1.0);
                    tan = sub.eval(2 * hit_edge, std::min(1.0, f + 1e-6)) -
                          sub.eval(2 * hit_edge, std::max(0.0, f - 1e-6));
                }
                side_he = tan.y > 0 ? 2 * hit_edge : 2 * hit_edge + 1;
            }
            pending_edge[i] = side_he;
        }
        // A hit half-edge may itself lie on a hole cycle: chase until a face is known.
        for (int round = 0; round <= static_cast<int>(holes.size()); ++round) {
            bool changed = false;
            for (std::size_t i = 0; i < holes.size(); ++i) {
                if (hole_face[i] != -2) continue;
                const int c = cycle_of[pending_edge[i]];
                if (face_of_cycle[c] >= 0) {
                    hole_face[i] = face_of_cycle[c];
                    changed = true;
                } else {
                    const auto it = std::find(holes.begin(), holes.end(), static_cast<std::size_t>(c));
                    const auto j = static_cast<std::size_t>(it - holes.begin());
                    if (hole_face[j] != -2) {
                        hole_face[i] = hole_face[j];
                        changed = true;
                    }
                }
            }
            if (!changed) break;
        }
        for (std::size_t i = 0; i < holes.size(); ++i) {
            const int f = hole_face[i] == -2 ? sub.unbounded_face : hole_face[i];
            face_of_cycle[holes[i]] = f;
            sub.faces[f].inner.push_back(cycles[holes[i]].rep);
            int e = cycles[holes[i]].rep;
            do {
                sub.half_edges[e].face = f;
                e = sub.half_edges[e].next;
            } while (e != cycles[holes[i]].rep);
        }
    }
}

// Splits each element at its vertices and emits the resulting edges.
void emit_edges(const std::vector<std::vector<std::pair<double, int>>>& splits,
                const std::vector<int>& piece_of_element, const PlanarSubdivision& sub,
                std::vector<RawEdge>& out, double eps) {
    std::unordered_map<unsigned long long, std::vector<int>> by_pair;
    for (std::size_t el = 0; el < splits.size(); ++el) {
        auto s = splits[el];
        std::sort(s.begin(), s.end());
        for (std::size_t i = 0; i + 1 < s.size(); ++i) {
            const int u = s[i].second, v = s[i + 1].second;
            if (u == v) continue;
            RawEdge e{u, v, {piece_of_element[el], s[i].first, s[i + 1].first}};
            const unsigned long long key = (static_cast<unsigned long long>(std::min(u, v)) << 32) |
                                           static_cast<unsigned>(std::max(u, v));
            auto& bucket = by_pair[key];
            bool duplicate = false;
            for (int j : bucket) {
                const RawEdge& o = out[j];
                if (o.arc.piece < 0 && e.arc.piece < 0) {
                    duplicate = true;
                    break;
                }
                auto mid = [&](const RawEdge& r) {
                    if (r.arc.piece < 0) return midpoint(sub.vertices[r.u].p, sub.vertices[r.v].p);
                    return sub.pieces[r.arc.piece].point_at(0.5 * (r.arc.t_from + r.arc.t_to));
                };
                if (dist(mid(o), mid(e)) <= std::max(eps * 16, 1e-12)) {
                    if (o.arc.piece >= 0 && e.arc.piece >= 0) {
                        throw GeometryError(ErrorCode::DegenerateOverlap, "two pieces coincide along an edge");
                    }
                    duplicate = true;
                    break;
                }
            }
            if (duplicate) continue;
            bucket.push_back(static_cast<int>(out.size()));
            out.push_back(e);
        }
    }
}

}  // namespace

// ---------------------------------------------------------------- accessors

std::pair<double, double> PlanarSubdivision::param_range(int h) const {
    const EdgeArc& a = arcs[h / 2];
    return (h % 2 == 0) ? std::pair{a.t_from, a.t_to} : std::pair{a.t_to, a.t_from};
}

Point PlanarSubdivision::eval(int h, double s) const {
    if (is_straight(h)) {
        const Point& a = origin_point(h);
        const Point& b = dest_point(h);
        if (s <= 0) return a;
        if (s >= 1) return b;
        return a + (b - a) * s;
    }
    if (s <= 0) return origin_point(h);
    if (s >= 1) return dest_point(h);
    const auto [t0, t1] = param_range(h);
    return pieces[arcs[h / 2].piece].point_at(t0 + (t1 - t0) * s);
}

Point PlanarSubdivision::direction_out(int h) const {
    if (is_straight(h)) {
        const Point d = dest_point(h) - origin_point(h);
        return d * (1.0 / norm(d));
    }
    const auto [t0, t1] = param_range(h);
    const Point t = pieces[arcs[h / 2].piece].tangent_at(t0);
    return t1 >= t0 ? t : t * -1.0;
}

double PlanarSubdivision::distance(int h, const Point& p, double* fraction) const {
    if (is_straight(h)) {
        const Point& a = origin_point(h);
        const Point d = dest_point(h) - a;
        const double len2 = dot(d, d);
        const double s = len2 > 0 ? std::clamp(dot(p - a, d) / len2, 0.0, 1.0) : 0.0;
        if (fraction) *fraction = s;
        return dist(p, a + d * s);
    }
    const auto [t0, t1] = param_range(h);
    const auto& piece = pieces[arcs[h / 2].piece];
    const double t = piece.project(p, std::min(t0, t1), std::max(t0, t1));
    if (fraction) *fraction = t1 != t0 ? (t - t0) / (t1 - t0) : 0.0;
    Point q = piece.point_at(t);
    if (t == t0) q = origin_point(h);
    if (t == t1) q = dest_point(h);
    return dist(p, q);
}

double PlanarSubdivision::area_term(int h, const Point& o) const {
    const Point a = origin_point(h) - o;
    const Point b = dest_point(h) - o;
    if (is_straight(h)) return cross(a, b);
    const auto [ta, tb] = param_range(h);
    const auto& piece = pieces[arcs[h / 2].piece];
    switch (piece.kind()) {
        case PieceKind::Line: return cross(a, b);
        case PieceKind::Graph: {
            const auto& g = std::get<GraphArc>(piece.geometry);
            return g.a * (tb * tb * tb - ta * ta * ta) / 3 - g.c * (tb - ta) - o.x * (b.y - a.y) + o.y * (b.x - a.x);
        }
        case PieceKind::Circle: {
            const auto& c = std::get<CircleArc>(piece.geometry);
            const double r = c.radius;
            const Point cc = c.center - o;
            return cc.x * r * (std::sin(tb) - std::sin(ta)) + r * r * (tb - ta) -
                   cc.y * r * (std::cos(tb) - std::cos(ta));
        }
    }
    return cross(a, b);
}

std::vector<int> PlanarSubdivision::cycle(int h) const {
    std::vector<int> out;
    int e = h;
    do {
        out.push_back(e);
        e = half_edges[e].next;
    } while (e != h && out.size() <= half_edges.size());
    return out;
}

std::vector<int> PlanarSubdivision::outer_vertices(int f) const {
    std::vector<int> out;
    if (faces[f].outer < 0) return out;
    for (int h : cycle(faces[f].outer)) out.push_back(half_edges[h].origin);
    return out;
}

int PlanarSubdivision::face_complexity(int f) const {
    int n = 0;
    if (faces[f].outer >= 0) n += static_cast<int>(cycle(faces[f].outer).size());
    for (int h : faces[f].inner) n += static_cast<int>(cycle(h).size());
    return n;
}

BoundingBox PlanarSubdivision::bounds() const {
    BoundingBox b = BoundingBox::empty();
    for (const auto& v : vertices) b.expand(v.p);
    if (!arcs.empty()) {
        for (int k = 0; k < num_edges(); ++k) {
            if (arcs[k].piece < 0) continue;
            // Monotone edges are boxed by their endpoints.
            b.expand(origin_point(2 * k));
        }
    }
    return b;
}

// ---------------------------------------------------------------- builders

PlanarSubdivision build_arrangement(const std::vector<MonotonePiece>& pieces,
                                    const std::vector<Segment>& extra_segments, double epsilon) {
    PlanarSubdivision sub;
    sub.epsilon = epsilon;
    sub.pieces = pieces;
    VertexTable table(sub.vertices, epsilon);

    // Elements: pieces first, then straight segments (as line pieces, not referenced by edges).
    const std::size_t np = pieces.size();
    std::vector<MonotonePiece> elements = pieces;
    for (const auto& s : extra_segments) {
        if (s.a == s.b) continue;
        LinePiece l{s.a, s.b};
        if (lex_less(l.b, l.a)) std::swap(l.a, l.b);
        elements.push_back({-1, 0, Convexity::Linear, l});
    }
    const std::size_t ne = elements.size();
    std::vector<BoundingBox> boxes(ne);
    for (std::size_t i = 0; i < ne; ++i) boxes[i] = bounding_box(elements[i]);

    std::vector<std::vector<std::pair<double, int>>> splits(ne);
    auto add_split = [&](std::size_t el, const Point& p) {
        const int v = table.insert(p);
        const Point& q = sub.vertices[v].p;
        double t = elements[el].project(q);
        if (q == elements[el].start()) t = elements[el].t_begin();
        if (q == elements[el].end()) t = elements[el].t_end();
        splits[el].push_back({t, v});
    };
    for (std::size_t i = 0; i < ne; ++i) {
        add_split(i, elements[i].start());
        add_split(i, elements[i].end());
    }

    // Candidate pairs by a sweep over box x-extents.
    std::vector<std::size_t> order(ne);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return boxes[a].min.x < boxes[b].min.x; });
    for (std::size_t oi = 0; oi < ne; ++oi) {
        const std::size_t i = order[oi];
        for (std::size_t oj = oi + 1; oj < ne; ++oj) {
            const std::size_t j = order[oj];
            if (boxes[j].min.x > boxes[i].max.x + epsilon) break;
            if (!boxes[i].intersects(boxes[j], epsilon)) continue;
            const MonotonePiece& a = elements[i];
            const MonotonePiece& b = elements[j];
            std::vector<Point> pts;
            const bool la = a.kind() == PieceKind::Line, lb = b.kind() == PieceKind::Line;
            if (la && lb) {
                const auto& x = std::get<LinePiece>(a.geometry);
                const auto& y = std::get<LinePiece>(b.geometry);
                pts = intersect_segments({x.a, x.b}, {y.a, y.b});
            } else if (la || lb) {
                const MonotonePiece& curve = la ? b : a;
                const auto& line = std::get<LinePiece>((la ? a : b).geometry);
                for (double t : intersect_piece_segment(curve, {line.a, line.b}, epsilon)) {
                    pts.push_back(curve.point_at(t));
                }
                // Curve endpoints resting on the segment.
                for (const Point& e : {curve.start(), curve.end()}) {
                    const MonotonePiece& lp = la ? a : b;
                    if (lp.distance(e) <= epsilon) pts.push_back(e);
                }
            } else {
                pts = intersect_pieces(a, b, epsilon);
            }
            for (const Point& p : pts) {
                add_split(i, p);
                add_split(j, p);
            }
        }
    }

    std::vector<int> piece_of_element(ne, -1);
    for (std::size_t i = 0; i < np; ++i) piece_of_element[i] = static_cast<int>(i);
    std::vector<RawEdge> edges;
    emit_edges(splits, piece_of_element, sub, edges, epsilon);
    if (np == 0) sub.pieces.clear();
    assemble(sub, std::move(edges));
    return sub;
}

PlanarSubdivision subdivision_from_graph(std::vector<Point> points,
                                         const std::vector<std::pair<int, int>>& edges, double epsilon) {
    PlanarSubdivision sub;
    sub.epsilon = epsilon;
    sub.vertices.reserve(points.size());
    for (const auto& p : points) sub.vertices.push_back({p, -1});
    std::vector<std::pair<int, int>> unique;
    unique.reserve(edges.size());
    for (auto [u, v] : edges) {
        if (u != v) unique.push_back({std::min(u, v), std::max(u, v)});
    }
    std::sort(unique.begin(), unique.end());
    unique.erase(std::unique(unique.begin(), unique.end()), unique.end());
    std::vector<RawEdge> raw;
    raw.reserve(unique.size());
    for (auto [u, v] : unique) raw.push_back({u, v, {}});
    assemble(sub, std::move(raw));
    return sub;
}

// ---------------------------------------------------------------- triangulation

namespace {

bool strictly_inside_wedge(const Point& v, const Point& next, const Point& prev, const Point& p) {
    // Interior wedge runs counter-clockwise from (next - v) to (prev - v).
    const double a0 = angle_of(next - v);
    double span = angle_of(prev - v) - a0;
    if (span <= 0) span += 2 * std::numbers::pi;
    double d = angle_of(p - v) - a0;
    if (d < 0) d += 2 * std::numbers::pi;
    return d > 1e-12 && d < span - 1e-12;
}

bool segments_cross_properly(const Point& a, const Point& b, const Point& c, const Point& d) {
    const int o1 = orient2d(a, b, c), o2 = orient2d(a, b, d);
    const int o3 = orient2d(c, d, a), o4 = orient2d(c, d, b);
    return o1 * o2 < 0 && o3 * o4 < 0;
}

bool on_open_segment(const Point& a, const Point& b, const Point& p) {
    if (p == a || p == b) return false;
    if (orient2d(a, b, p) != 0) return false;
    return std::min(a.x, b.x) <= p.x && p.x <= std::max(a.x, b.x) && std::min(a.y, b.y) <= p.y &&
           p.y <= std::max(a.y, b.y);
}

}  // namespace

std::vector<std::array<int, 3>> triangulate_face(const PlanarSubdivision& sub, int face) {
    const auto& f = sub.faces[face];
    if (f.outer < 0) throw GeometryError(ErrorCode::InvalidInput, "cannot triangulate the unbounded face");
    auto check_straight = [&](int rep) {
        for (int h : sub.cycle(rep)) {
            if (!sub.is_straight(h)) throw GeometryError(ErrorCode::CurvedCell, "face has a curved edge");
        }
    };
    check_straight(f.outer);
    for (int h : f.inner) check_straight(h);

    std::vector<int> poly = sub.outer_vertices(face);
    auto P = [&](int v) -> const Point& { return sub.vertices[v].p; };

    // Bridge holes, rightmost first.
    std::vector<std::vector<int>> holes;
    for (int h : f.inner) {
        std::vector<int> hv;
        for (int e : sub.cycle(h)) hv.push_back(sub.half_edges[e].origin);
        holes.push_back(hv);
    }
    auto rightmost = [&](const std::vector<int>& hv) {
        std::size_t best = 0;
        for (std::size_t i = 1; i < hv.size(); ++i) {
            if (lex_less(P(hv[best]), P(hv[i]))) best = i;
        }
        return best;
    };
    std::sort(holes.begin(), holes.end(), [&](const auto& a, const auto& b) {
        return lex_less(P(b[rightmost(b)]), P(a[rightmost(a)]));
    });
    for (std::size_t hi = 0; hi < holes.size(); ++hi) {
        const auto& hv = holes[hi];
        const std::size_t r = rightmost(hv);
        const Point& hp = P(hv[r]);
        // Candidate polygon positions by distance.
        std::vector<std::size_t> cand(poly.size());
        std::iota(cand.begin(), cand.end(), 0);
        std::sort(cand.begin(), cand.end(), [&](std::size_t a, std::size_t b) {
            const double da = dist(P(poly[a]), hp), db = dist(P(poly[b]), hp);
            return da != db ? da < db : a < b;
        });
        std::size_t chosen = poly.size();
        for (std::size_t ci : cand) {
            const Point& vp = P(poly[ci]);
            if (vp == hp) continue;
            const std::size_t n = poly.size();
            if (!strictly_inside_wedge(vp, P(poly[(ci + 1) % n]), P(poly[(ci + n - 1) % n]), hp)) continue;
            bool ok = true;
            auto blocks = [&](const std::vector<int>& ring) {
                for (std::size_t k = 0; k < ring.size() && ok; ++k) {
                    const Point& a = P(ring[k]);
                    const Point& b = P(ring[(k + 1) % ring.size()]);
                    if (segments_cross_properly(vp, hp, a, b) || on_open_segment(vp, hp, a)) ok = false;
                }
            };
            blocks(poly);
            for (std::size_t hj = hi; hj < holes.size() && ok; ++hj) blocks(holes[hj]);
            if (ok) {
                chosen = ci;
                break;
            }
        }
        if (chosen == poly.size()) throw GeometryError(ErrorCode::InvalidInput, "no bridge found for a hole of face " + std::to_string(face));
        std::vector<int> merged(poly.begin(), poly.begin() + static_cast<long>(chosen) + 1);
        for (std::size_t k = 0; k <= hv.size(); ++k) merged.push_back(hv[(r + k) % hv.size()]);
        merged.insert(merged.end(), poly.begin() + static_cast<long>(chosen), poly.end());
        poly = std::move(merged);
    }

    // Ear clipping, cursor starting at the lowest vertex id.
    std::vector<std::array<int, 3>> tris;
    std::vector<int> ring = poly;
    std::size_t cursor = static_cast<std::size_t>(std::min_element(ring.begin(), ring.end()) - ring.begin());
    std::size_t stall = 0;
    while (ring.size() > 3) {
        const std::size_t n = ring.size();
        const std::size_t i = cursor % n;
        const int a = ring[(i + n - 1) % n], b = ring[i], c = ring[(i + 1) % n];
        bool ear = orient2d(P(a), P(b), P(c)) > 0;
        for (std::size_t k = 0; k < n && ear; ++k) {
            const int v = ring[k];
            const Point& p = P(v);
            if (p == P(a) || p == P(b) || p == P(c)) continue;
            if (orient2d(P(a), P(b), p) >= 0 && orient2d(P(b), P(c), p) >= 0 && orient2d(P(c), P(a), p) >= 0) {
                ear = false;
            }
        }
        if (ear) {
            tris.push_back({a, b, c});
            ring.erase(ring.begin() + static_cast<long>(i));
            cursor = (i + n - 2) % (n - 1);
            stall = 0;
        } else {
            cursor = (i + 1) % n;
            if (++stall > n) {
                // Drop a degenerate (zero-area) corner and retry.
                bool dropped = false;
                for (std::size_t k = 0; k < n; ++k) {
                    const int pa = ring[(k + n - 1) % n], pb = ring[k], pc = ring[(k + 1) % n];
                    if (P(pa) == P(pc) || (orient2d(P(pa), P(pb), P(pc)) == 0 &&
                                           dot(P(pa) - P(pb), P(pc) - P(pb)) > 0)) {
                        ring.erase(ring.begin() + static_cast<long>(k));
                        dropped = true;
                        break;
                    }
                }
                if (!dropped) throw GeometryError(ErrorCode::InvalidInput, "ear clipping stalled");
                stall = 0;
            }
        }
    }
    if (ring.size() == 3 && orient2d(P(ring[0]), P(ring[1]), P(ring[2])) > 0) {
        tris.push_back({ring[0], ring[1], ring[2]});
    }
    return tris;
}

PlanarSubdivision triangulate_cells(const PlanarSubdivision& sub, int max_sides) {
    std::vector<std::pair<int, int>> edges;
    edges.reserve(sub.num_edges() * 2);
    for (int k = 0; k < sub.num_edges(); ++k) {
        if (!sub.is_straight(2 * k)) {
            const int f1 = sub.half_edges[2 * k].face, f2 = sub.half_edges[2 * k + 1].face;
            for (int f : {f1, f2}) {
                if (f != sub.unbounded_face && sub.face_complexity(f) > max_sides) {
                    throw GeometryError(ErrorCode::CurvedCell, "face has a curved edge");
                }
            }
        }
        edges.push_back({sub.half_edges[2 * k].origin, sub.half_edges[2 * k + 1].origin});
    }
    if (!sub.arcs.empty()) {
        throw GeometryError(ErrorCode::CurvedCell, "triangulation requires a straight-line subdivision");
    }
    for (int f = 0; f < static_cast<int>(sub.faces.size()); ++f) {
        if (f == sub.unbounded_face) continue;
        if (sub.face_complexity(f) <= max_sides && sub.faces[f].inner.empty()) continue;
        for (const auto& t : triangulate_face(sub, f)) {
            edges.push_back({t[0], t[1]});
            edges.push_back({t[1], t[2]});
            edges.push_back({t[2], t[0]});
        }
    }
    std::vector<Point> pts;
    pts.reserve(sub.vertices.size());
    for (const auto& v : sub.vertices) pts.push_back(v.p);
    return subdivision_from_graph(std::move(pts), edges, sub.epsilon);
}

// ---------------------------------------------------------------- queries and checks

int face_walk_locate(const PlanarSubdivision& sub, const Point& q) {
    for (int h = 0; h < static_cast<int>(sub.half_edges.size()); h += 2) {
        if (sub.distance(h, q) <= sub.epsilon) {
            throw GeometryError(ErrorCode::OnBoundary, "query point lies on an edge");
        }
    }
    for (int f = 0; f < static_cast<int>(sub.faces.size()); ++f) {
        const auto& face = sub.faces[f];
        if (face.outer < 0) continue;
        if (!point_in_cycle(sub, face.outer, q)) continue;
        bool in_hole = false;
        for (int h : face.inner) {
            // Inner cycles run clockwise; parity still tells inside/outside.
            if (point_in_cycle(sub, h, q)) {
                in_hole = true;
                break;
            }
        }
        if (!in_hole) return f;
    }
    return sub.unbounded_face;
}

int connected_components(const PlanarSubdivision& sub) {
    const int nv = static_cast<int>(sub.vertices.size());
    std::vector<int> parent(nv);
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](int x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    };
    int comps = nv;
    for (int k = 0; k < sub.num_edges(); ++k) {
        const int a = find(sub.half_edges[2 * k].origin), b = find(sub.half_edges[2 * k + 1].origin);
        if (a != b) {
            parent[a] = b;
            --comps;
        }
    }
    return comps;
}

std::vector<std::string> validate_dcel(const PlanarSubdivision& sub) {
    std::vector<std::string> report;
    const int nh = static_cast<int>(sub.half_edges.size());
    const int nf = static_cast<int>(sub.faces.size());
    auto bad = [&](const std::string& s) {
        if (report.size() < 64) report.push_back(s);
    };
    auto valid_he = [&](int h) { return h >= 0 && h < nh; };
    for (int h = 0; h < nh; ++h) {
        const auto& e = sub.half_edges[h];
        if (!valid_he(e.twin) || !valid_he(e.next) || !valid_he(e.prev)) {
            bad("half-edge " + std::to_string(h) + " has a dangling pointer");
            continue;
        }
        if (e.twin == h || sub.half_edges[e.twin].twin != h) bad("twin(twin(e)) != e at " + std::to_string(h));
        if (sub.half_edges[e.next].prev != h) bad("prev(next(e)) != e at " + std::to_string(h));
        if (sub.half_edges[e.prev].next != h) bad("next(prev(e)) != e at " + std::to_string(h));
        if (sub.half_edges[e.next].origin != sub.half_edges[e.twin].origin) {
            bad("next(e) does not start at dest(e) for " + std::to_string(h));
        }
        if (e.face < 0 || e.face >= nf) bad("half-edge " + std::to_string(h) + " has no face");
        else if (sub.half_edges[e.next].face != e.face) bad("cycle with mixed faces at " + std::to_string(h));
    }
    if (!report.empty()) return report;

    // Cycles: every one is registered exactly once with its face.
    std::vector<int> seen(nh, 0);
    int unbounded = 0;
    for (int f = 0; f < nf; ++f) {
        const auto& face = sub.faces[f];
        if (face.outer < 0) ++unbounded;
        std::vector<int> reps = face.inner;
        if (face.outer >= 0) reps.push_back(face.outer);
        for (int rep : reps) {
            if (!valid_he(rep)) {
                bad("face " + std::to_string(f) + " references an invalid half-edge");
                continue;
            }
            int e = rep, steps = 0;
            do {
                if (sub.half_edges[e].face != f) bad("face " + std::to_string(f) + " cycle mislabelled");
                ++seen[e];
                e = sub.half_edges[e].next;
            } while (e != rep && ++steps <= nh);
            if (steps > nh) bad("cycle does not close at face " + std::to_string(f));
        }
    }
    if (unbounded != 1) bad("expected exactly one unbounded face, found " + std::to_string(unbounded));
    if (nf > 0 && sub.faces[sub.unbounded_face].outer >= 0) bad("unbounded face has an outer boundary");
    for (int h = 0; h < nh; ++h) {
        if (seen[h] != 1) {
            bad("half-edge " + std::to_string(h) + " lies on " + std::to_string(seen[h]) + " registered cycles");
            break;
        }
    }
    for (int v = 0; v < static_cast<int>(sub.vertices.size()); ++v) {
        const int h = sub.vertices[v].half_edge;
        if (h >= 0 && (!valid_he(h) || sub.half_edges[h].origin != v)) {
            bad("vertex " + std::to_string(v) + " points to a foreign half-edge");
        }
    }
    const int V = static_cast<int>(sub.vertices.size());
    const int E = sub.num_edges();
    const int C = connected_components(sub);
    if (V - E + nf != 1 + C) {
        bad("Euler formula violated: V - E + F = " + std::to_string(V - E + nf) + ", expected " +
            std::to_string(1 + C));
    }
    return report;
}

// ---------------------------------------------------------------- FaceLocator

FaceLocator::FaceLocator(const PlanarSubdivision& sub) : sub_(&sub) {
    box_ = sub.bounds();
    const int m = sub.num_edges();
    if (m == 0 || box_.is_empty()) return;
    const double w = std::max(box_.width(), 1e-12), h = std::max(box_.height(), 1e-12);
    const double cells = std::max(1.0, std::min(4.0 * m, 4e6));
    nx_ = std::clamp(static_cast<int>(std::sqrt(cells * w / h)), 1, 4096);
    ny_ = std::clamp(static_cast<int>(cells / nx_), 1, 4096);
    cell_w_ = w / nx_;
    cell_h_ = h / ny_;
    std::vector<std::pair<int, int>> pairs;  // (cell, edge)
    for (int k = 0; k < m; ++k) {
        BoundingBox b = BoundingBox::empty();
        b.expand(sub.origin_point(2 * k));
        b.expand(sub.dest_point(2 * k));
        for (int y = cell_y(b.min.y); y <= cell_y(b.max.y); ++y) {
            for (int x = cell_x(b.min.x); x <= cell_x(b.max.x); ++x) pairs.push_back({y * nx_ + x, k});
        }
    }
    cell_start_.assign(static_cast<std::size_t>(nx_) * ny_ + 1, 0);
    for (auto& pr : pairs) ++cell_start_[pr.first + 1];
    for (std::size_t i = 1; i < cell_start_.size(); ++i) cell_start_[i] += cell_start_[i - 1];
    cell_edges_.resize(pairs.size());
    std::vector<int> fill(cell_start_.begin(), cell_start_.end() - 1);
    for (auto& pr : pairs) cell_edges_[fill[pr.first]++] = pr.second;
}

int FaceLocator::cell_x(double x) const {
    return std::clamp(static_cast<int>((x - box_.min.x) / cell_w_), 0, nx_ - 1);
}
int FaceLocator::cell_y(double y) const {
    return std::clamp(static_cast<int>((y - box_.min.y) / cell_h_), 0, ny_ - 1);
}

int FaceLocator::locate(const Point& p) const {
    const PlanarSubdivision& sub = *sub_;
    const int m = sub.num_edges();
    if (m == 0) return sub.unbounded_face;
    double best = std::numeric_limits<double>::infinity();
    int best_edge = -1;
    double best_frac = 0;
    auto consider = [&](int k) {
        double frac;
        const double d = sub.distance(2 * k, p, &frac);
        if (d < best || (d == best && k < best_edge)) {
            best = d;
            best_edge = k;
            best_frac = frac;
        }
    };
    if (!box_.contains(p)) {
        for (int k = 0; k < m; ++k) consider(k);
    } else {
        const int cx = cell_x(p.x), cy = cell_y(p.y);
        const double step = std::min(cell_w_, cell_h_);
        const int max_r = std::max(nx_, ny_);
        for (int r = 0; r <= max_r; ++r) {
            if (best_edge >= 0 && (r - 1) * step > best) break;
            for (int y = cy - r; y <= cy + r; ++y) {
                if (y < 0 || y >= ny_) continue;
                const bool edge_row = (y == cy - r || y == cy + r);
                for (int x = cx - r; x <= cx + r; x += (edge_row ? 1 : 2 * r)) {
                    if (x >= 0 && x < nx_) {
                        const int c = y * nx_ + x;
                        for (int i = cell_start_[c]; i < cell_start_[c + 1]; ++i) consider(cell_edges_[i]);
                    }
                    if (r == 0) break;
                }
            }
        }
    }
    const int h = 2 * best_edge;
    constexpr double kEnd = 1e-9;
    if (best_frac > kEnd && best_frac < 1 - kEnd) {
        const Point foot = sub.eval(h, best_frac);
        Point tan;
        if (sub.is_straight(h)) {
            tan = sub.dest_point(h) - sub.origin_point(h);
        } else {
            const auto [t0, t1] = sub.param_range(h);
            const Point t = sub.pieces[sub.arcs[best_edge].piece].tangent_at(t0 + (t1 - t0) * best_frac);
            tan = t1 >= t0 ? t : t * -1.0;
        }
        return cross(tan, p - foot) > 0 ? sub.half_edges[h].face : sub.half_edges[h + 1].face;
    }
    const int v = best_frac <= 0.5 ? sub.half_edges[h].origin : sub.half_edges[h + 1].origin;
    return face_in_sector(sub, v, p);
}

}  // namespace curveloc
