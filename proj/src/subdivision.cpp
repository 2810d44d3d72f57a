#include "curveloc/subdivision.hpp"

#include "numeric.hpp"

#include <algorithm>
#include <array>
#include <chrono>
#include <deque>
#include <limits>
#include <numbers>
#include <numeric>
#include <random>
#include <unordered_map>

namespace curveloc {

const char* to_string(SceneKind k) { return k == SceneKind::Disks ? "disks" : "arcs"; }

namespace {

constexpr double kTwoPi = 2 * std::numbers::pi;
constexpr int kMaxDepth = 24;

// ---------------------------------------------------------------- curve parameterization
// Disks use the polar angle, parabola arcs the abscissa.

Point curve_point(const Curve& c, double t) {
    if (const auto* d = std::get_if<DiskCurve>(&c.shape)) {
        return {d->center.x + d->radius * std::cos(t), d->center.y + d->radius * std::sin(t)};
    }
    const auto& p = std::get<ParabolaArc>(c.shape);
    return {t, p.eval(t)};
}

// Unit normal pointing to the Inside/Above side.
Point positive_normal(const Curve& c, double t) {
    if (std::holds_alternative<DiskCurve>(c.shape)) return {-std::cos(t), -std::sin(t)};
    const double s = std::get<ParabolaArc>(c.shape).slope(t);
    const double n = std::hypot(s, 1.0);
    return {-s / n, 1 / n};
}

std::vector<double> edge_params(const Curve& c, const Point& a, const Point& b) {
    std::vector<double> out;
    const Point d = b - a;
    if (const auto* disk = std::get_if<DiskCurve>(&c.shape)) {
        const Point w = a - disk->center;
        for (double u : detail::solve_quadratic(dot(d, d), 2 * dot(d, w), dot(w, w) - disk->radius * disk->radius)) {
            if (u < -1e-12 || u > 1 + 1e-12) continue;
            const Point p = a + d * std::clamp(u, 0.0, 1.0);
            double t = std::atan2(p.y - disk->center.y, p.x - disk->center.x);
            if (t < 0) t += kTwoPi;
            out.push_back(t);
        }
        return out;
    }
    const auto& p = std::get<ParabolaArc>(c.shape);
    const double xl = std::max(p.x_lo, std::min(a.x, b.x)), xh = std::min(p.x_hi, std::max(a.x, b.x));
    if (xl > xh) return out;
    if (a.x == b.x) {
        const double y = p.eval(a.x);
        if (y >= std::min(a.y, b.y) && y <= std::max(a.y, b.y)) out.push_back(a.x);
        return out;
    }
    const double m = d.y / d.x;
    // Roots at a shared vertex can round just outside the range.
    const double tol = 1e-9 * (1 + std::abs(xl) + std::abs(xh));
    for (double x : detail::solve_quadratic(p.a, p.b - m, p.c - a.y + m * a.x)) {
        if (x >= xl - tol && x <= xh + tol) out.push_back(std::clamp(x, xl, xh));
    }
    return out;
}

double segment_distance(const Point& p, const Point& a, const Point& b) {
    const Point d = b - a;
    const double len2 = dot(d, d);
    const double t = len2 > 0 ? std::clamp(dot(p - a, d) / len2, 0.0, 1.0) : 0.0;
    return dist(p, a + d * t);
}

bool strictly_inside(const std::vector<Point>& poly, const Point& p) {
    for (std::size_t i = 0; i < poly.size(); ++i) {
        if (orient2d(poly[i], poly[(i + 1) % poly.size()], p) <= 0) return false;
    }
    return true;
}

double boundary_distance(const std::vector<Point>& poly, const Point& p) {
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < poly.size(); ++i) {
        best = std::min(best, segment_distance(p, poly[i], poly[(i + 1) % poly.size()]));
    }
    return best;
}

struct Component {
    double t;       // parameter at the midpoint
    Point mid;
    Point normal;   // towards the positive side
    double clearance;
};

// Arcs of the curve running through the interior of a convex cell. Slivers
// hugging the boundary closer than `min_clearance` are dropped.
std::vector<Component> components(const Curve& c, const std::vector<Point>& poly, double min_clearance) {
    std::vector<Component> out;
    if (std::holds_alternative<SegmentCurve>(c.shape)) return out;
    std::vector<double> ts;
    for (std::size_t i = 0; i < poly.size(); ++i) {
        for (double t : edge_params(c, poly[i], poly[(i + 1) % poly.size()])) ts.push_back(t);
    }
    std::vector<std::pair<double, double>> spans;
    if (std::holds_alternative<DiskCurve>(c.shape)) {
        std::sort(ts.begin(), ts.end());
        if (ts.empty()) {
            spans.push_back({0, kTwoPi});
        } else {
            for (std::size_t i = 0; i + 1 < ts.size(); ++i) spans.push_back({ts[i], ts[i + 1]});
            spans.push_back({ts.back(), ts.front() + kTwoPi});
        }
    } else {
        const auto& p = std::get<ParabolaArc>(c.shape);
        ts.push_back(p.x_lo);
        ts.push_back(p.x_hi);
        std::sort(ts.begin(), ts.end());
        for (std::size_t i = 0; i + 1 < ts.size(); ++i) spans.push_back({ts[i], ts[i + 1]});
    }
    for (auto [t0, t1] : spans) {
        if (!(t1 > t0)) continue;
        double tm = 0.5 * (t0 + t1);
        const Point m = curve_point(c, tm);
        if (!strictly_inside(poly, m)) continue;
        const double clear = boundary_distance(poly, m);
        if (clear <= min_clearance) continue;
        if (c.is_disk() && tm >= kTwoPi) tm -= kTwoPi;
        out.push_back({tm, m, positive_normal(c, tm), clear});
    }
    return out;
}

bool positive_sign(Sign s) { return s == Sign::Inside || s == Sign::Above; }

struct CellAnalysis {
    bool chain_ok = false;   // a valid chain exists
    bool split = false;      // some crossing curve has several arcs in the cell
    std::vector<ListEntry> chain;
    std::vector<Point> gap_samples;
};

struct SceneData {
    const std::vector<Curve>* curves;
    std::vector<BoundingBox> boxes;
    std::vector<int> piece_start;  // per curve into the piece list
    const std::vector<MonotonePiece>* pieces;
    double epsilon;
    bool disks;
};

int piece_for(const SceneData& s, int curve, double t) {
    for (int k = s.piece_start[curve]; k < s.piece_start[curve + 1]; ++k) {
        const auto& p = (*s.pieces)[k];
        if (t >= p.t_begin() && t <= p.t_end()) return k;
    }
    return s.piece_start[curve];
}

CellAnalysis analyze_cell(const SceneData& s, const std::vector<Point>& poly) {
    CellAnalysis out;
    const auto& curves = *s.curves;
    BoundingBox pb = BoundingBox::empty();
    for (const auto& p : poly) pb.expand(p);
    Point centroid{0, 0};
    for (const auto& p : poly) centroid = centroid + p;
    centroid = centroid * (1.0 / static_cast<double>(poly.size()));

    std::vector<int> crossing;
    std::vector<std::vector<Component>> comps;
    for (int i = 0; i < static_cast<int>(curves.size()); ++i) {
        if (!s.boxes[i].intersects(pb, s.epsilon)) continue;
        auto c = components(curves[i], poly, s.epsilon);
        if (c.empty()) continue;
        if (c.size() > 1) out.split = true;
        crossing.push_back(i);
        comps.push_back(std::move(c));
    }
    const int m = static_cast<int>(crossing.size());
    if (m == 0) {
        out.chain_ok = true;
        out.gap_samples.push_back(centroid);
        return out;
    }
    if (m > 64) return out;

    // Two disks crossing inside the cell (away from its corners) cannot be ordered.
    if (s.disks) {
        double corner_tol = 1e3 * s.epsilon;
        for (int a = 0; a < m; ++a) {
            for (int b = a + 1; b < m; ++b) {
                const auto& d1 = std::get<DiskCurve>(curves[crossing[a]].shape);
                const auto& d2 = std::get<DiskCurve>(curves[crossing[b]].shape);
                const Point delta = d2.center - d1.center;
                const double L = norm(delta);
                if (L == 0 || L > d1.radius + d2.radius || L < std::abs(d1.radius - d2.radius)) continue;
                const double x = (L * L + d1.radius * d1.radius - d2.radius * d2.radius) / (2 * L);
                const double h = std::sqrt(std::max(0.0, d1.radius * d1.radius - x * x));
                const Point u = delta * (1.0 / L), v{-u.y, u.x};
                for (double sgn : {1.0, -1.0}) {
                    const Point p = d1.center + u * x + v * (sgn * h);
                    if (!strictly_inside(poly, p)) continue;
                    bool at_corner = false;
                    for (const auto& q : poly) at_corner = at_corner || dist(p, q) <= corner_tol;
                    if (!at_corner) return out;
                }
            }
        }
    }

    // Sample both sides of every arc; membership bits over the crossing curves.
    struct Sample {
        Point p;
        std::uint64_t bits;
    };
    std::vector<Sample> samples;
    auto membership = [&](const Point& p, std::uint64_t& bits) {
        bits = 0;
        for (int k = 0; k < m; ++k) {
            const Sign sg = classify(curves[crossing[k]], p, 0.0);
            if (sg == Sign::On || sg == Sign::OutsideSpan) return false;
            if (positive_sign(sg)) bits |= std::uint64_t{1} << k;
        }
        return true;
    };
    for (int k = 0; k < m; ++k) {
        for (const auto& c : comps[k]) {
            double delta = std::min(0.25 * c.clearance, 1e-3 * std::max(c.clearance, s.epsilon * 1e3));
            bool done = false;
            for (int iter = 0; iter < 40 && !done; ++iter, delta *= 0.5) {
                std::uint64_t bp, bn, bm;
                const Point pp = c.mid + c.normal * delta, pn = c.mid - c.normal * delta;
                if (!membership(pp, bp) || !membership(pn, bn)) continue;
                // Only the arc's own curve may differ between the two sides.
                const std::uint64_t own = std::uint64_t{1} << k;
                if ((bp ^ bn) != own || !(bp & own)) continue;
                // Other curves keep the classification of the arc midpoint.
                bool mid_ok = true;
                bm = 0;
                for (int j = 0; j < m && mid_ok; ++j) {
                    if (j == k) continue;
                    const Sign sg = classify(curves[crossing[j]], c.mid, 0.0);
                    if (sg == Sign::On) mid_ok = false;
                    else if (positive_sign(sg)) bm |= std::uint64_t{1} << j;
                }
                if (!mid_ok || (bp & ~own) != bm) continue;
                samples.push_back({pp, bp});
                samples.push_back({pn, bn});
                done = true;
            }
            if (!done) return out;
        }
    }

    // Pairwise relations from the membership combinations that occur.
    std::vector<std::uint8_t> combos(static_cast<std::size_t>(m) * m, 0);
    for (const auto& sm : samples) {
        for (int a = 0; a < m; ++a) {
            const int ba = (sm.bits >> a) & 1;
            for (int b = a + 1; b < m; ++b) {
                const int bb = (sm.bits >> b) & 1;
                combos[a * m + b] |= static_cast<std::uint8_t>(1u << (ba * 2 + bb));
            }
        }
    }
    // flip[k]: the chain set of curve k is its negative side.
    std::vector<int> flip(m, -1);
    for (int root = 0; root < m; ++root) {
        if (flip[root] >= 0) continue;
        flip[root] = 0;
        std::vector<int> stack{root};
        while (!stack.empty()) {
            const int a = stack.back();
            stack.pop_back();
            for (int b = 0; b < m; ++b) {
                if (b == a) continue;
                const std::uint8_t cmb = a < b ? combos[a * m + b] : combos[b * m + a];
                // Bit layout: (first curve bit, second curve bit) -> 1 << (2*first + second).
                const bool miss00 = !(cmb & 1), miss01 = !(cmb & 2), miss10 = !(cmb & 4), miss11 = !(cmb & 8);
                const int missing = miss00 + miss01 + miss10 + miss11;
                if (missing != 1) return out;
                const int parity = (miss00 || miss11) ? 1 : 0;
                const int want = flip[a] ^ parity;
                if (flip[b] < 0) {
                    flip[b] = want;
                    stack.push_back(b);
                } else if (flip[b] != want) {
                    return out;
                }
            }
        }
    }
    std::uint64_t flip_mask = 0;
    for (int k = 0; k < m; ++k) {
        if (flip[k]) flip_mask |= std::uint64_t{1} << k;
    }
    // X_a within X_b when no sample is in X_a but not in X_b.
    std::vector<int> rank(m, 0);
    for (int a = 0; a < m; ++a) {
        for (int b = 0; b < m; ++b) {
            if (a == b) continue;
            bool subset = true;
            for (const auto& sm : samples) {
                const std::uint64_t x = sm.bits ^ flip_mask;
                if (((x >> a) & 1) && !((x >> b) & 1)) {
                    subset = false;
                    break;
                }
            }
            if (subset) ++rank[a];
        }
    }
    std::vector<int> order(m);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int a, int b) { return rank[a] < rank[b]; });
    for (int i = 0; i < m; ++i) {
        if (rank[order[i]] != i) return out;
    }

    out.gap_samples.assign(m + 1, Point{std::nan(""), 0});
    std::vector<char> have(m + 1, 0);
    for (const auto& sm : samples) {
        const std::uint64_t x = sm.bits ^ flip_mask;
        int k = 0;
        while (k < m && ((x >> order[k]) & 1)) ++k;
        for (int r = k; r < m; ++r) {
            if ((x >> order[r]) & 1) return out;
        }
        if (!have[k]) {
            have[k] = 1;
            out.gap_samples[k] = sm.p;
        }
    }
    for (int k = 0; k <= m; ++k) {
        if (!have[k]) return out;
    }
    for (int i = 0; i < m; ++i) {
        const int k = order[i];
        out.chain.push_back({crossing[k], piece_for(s, crossing[k], comps[k].front().t), flip[k] == 0});
    }
    out.chain_ok = true;
    return out;
}

// Chain index of q: number of leading chain sets containing it.
int chain_position(const AugmentedSubdivision& aug, int cell, const Point& q, bool& on) {
    const int m = aug.chain_length(cell);
    int k = 0;
    on = false;
    while (k < m) {
        const ListEntry& e = aug.entry(cell, k);
        const auto in = in_chain_set(aug.curves[e.curve], e, q);
        if (!in) {
            on = true;
            return k;
        }
        if (!*in) break;
        ++k;
    }
    return k;
}

// Installs per-cell analyses into aug (chains, gap faces, face labels, stats).
void install(AugmentedSubdivision& aug, const std::vector<CellAnalysis>& cells) {
    const PlanarSubdivision& C = aug.C;
    const int nf = static_cast<int>(C.faces.size());
    FaceLocator loc(aug.A);
    aug.face_signs.assign(aug.A.faces.size(), {});
    aug.chain_start.assign(nf + 1, 0);
    aug.chain.clear();
    aug.gaps.clear();
    for (int f = 0; f < nf; ++f) {
        aug.chain_start[f] = static_cast<int>(aug.chain.size());
        std::vector<Point> samples;
        if (f == C.unbounded_face) {
            samples.push_back(aug.box.min - Point{aug.box.diameter(), aug.box.diameter()});
        } else {
            const CellAnalysis& a = cells[f];
            aug.chain.insert(aug.chain.end(), a.chain.begin(), a.chain.end());
            samples = a.gap_samples;
        }
        for (const auto& p : samples) {
            const int af = f == C.unbounded_face ? aug.A.unbounded_face : loc.locate(p);
            aug.gaps.push_back(af);
            if (aug.face_signs[af].empty()) aug.face_signs[af] = sign_vector(aug.curves, p, 0.0);
        }
    }
    aug.chain_start[nf] = static_cast<int>(aug.chain.size());

    // A list is reversed when the boundary segment sits in the innermost gap.
    aug.reversed.assign(C.half_edges.size(), 0);
    long long list_entries = 0;
    int cmax = 0;
    for (int f = 0; f < nf; ++f) {
        if (f == C.unbounded_face) continue;
        const auto segs = aug.cell_segments(f);
        cmax = std::max(cmax, static_cast<int>(segs.size()));
        const int m = aug.chain_length(f);
        list_entries += static_cast<long long>(m) * static_cast<long long>(segs.size());
        if (m == 0) continue;
        const auto verts = C.outer_vertices(f);
        Point centroid{0, 0};
        for (int v : verts) centroid = centroid + C.vertices[v].p;
        centroid = centroid * (1.0 / static_cast<double>(verts.size()));
        for (int h : segs) {
            const Point mid = midpoint(C.origin_point(h), C.dest_point(h));
            const Point probe = mid + (centroid - mid) * 1e-6;
            bool on;
            const int k = chain_position(aug, f, probe, on);
            aug.reversed[h] = (!on && k == m) ? 1 : 0;
        }
    }
    aug.stats.cells = nf - 1;
    aug.stats.list_entries = list_entries;
    aug.stats.max_cell_complexity = cmax;
    aug.stats.size = static_cast<long long>(C.vertices.size()) + C.num_edges() + nf + list_entries;
}

SceneData scene_data(const AugmentedSubdivision& aug) {
    SceneData s;
    s.curves = &aug.curves;
    s.pieces = &aug.pieces;
    s.epsilon = aug.epsilon;
    s.disks = aug.kind == SceneKind::Disks;
    s.piece_start.assign(aug.curves.size() + 1, 0);
    for (const auto& c : aug.curves) s.boxes.push_back(bounding_box(c));
    std::size_t k = 0;
    for (std::size_t i = 0; i < aug.curves.size(); ++i) {
        s.piece_start[i] = static_cast<int>(k);
        while (k < aug.pieces.size() && aug.pieces[k].parent == aug.curves[i].id) ++k;
    }
    s.piece_start[aug.curves.size()] = static_cast<int>(k);
    return s;
}

// ---------------------------------------------------------------- refinement

std::uint64_t edge_key(int a, int b) {
    if (a > b) std::swap(a, b);
    return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(a)) << 32) | static_cast<std::uint32_t>(b);
}

struct TriangleSoup {
    std::vector<Point> pts;
    std::vector<std::array<int, 3>> tris;
    std::vector<int> depth;
    std::vector<char> alive;
    std::unordered_map<std::uint64_t, std::array<int, 2>> edge_tris;

    int add(const std::array<int, 3>& t, int d) {
        const int id = static_cast<int>(tris.size());
        tris.push_back(t);
        depth.push_back(d);
        alive.push_back(1);
        for (int i = 0; i < 3; ++i) {
            auto [it, fresh] = edge_tris.try_emplace(edge_key(t[i], t[(i + 1) % 3]), std::array<int, 2>{-1, -1});
            auto& slot = it->second;
            (slot[0] < 0 ? slot[0] : slot[1]) = id;
        }
        return id;
    }
    void remove(int id) {
        alive[id] = 0;
        const auto& t = tris[id];
        for (int i = 0; i < 3; ++i) {
            auto it = edge_tris.find(edge_key(t[i], t[(i + 1) % 3]));
            auto& slot = it->second;
            if (slot[0] == id) slot[0] = slot[1];
            slot[1] = -1;
            if (slot[0] < 0) edge_tris.erase(it);
        }
    }
    // Splits the longest edge of t and the triangle across it; returns new triangles.
    std::vector<int> bisect(int t) {
        const auto tri = tris[t];
        int best = 0;
        double len = -1;
        for (int i = 0; i < 3; ++i) {
            const double l = dist(pts[tri[i]], pts[tri[(i + 1) % 3]]);
            if (l > len) len = l, best = i;
        }
        const int u = tri[best], v = tri[(best + 1) % 3];
        const int mid = static_cast<int>(pts.size());
        pts.push_back(midpoint(pts[u], pts[v]));
        const auto owners = edge_tris.at(edge_key(u, v));
        std::vector<int> made;
        for (int o : owners) {
            if (o < 0) continue;
            auto ot = tris[o];
            // Rotate so the split edge is (ot[0], ot[1]) in ccw order.
            while (!((ot[0] == u && ot[1] == v) || (ot[0] == v && ot[1] == u))) {
                ot = {ot[1], ot[2], ot[0]};
            }
            const int d = depth[o] + 1;
            remove(o);
            made.push_back(add({ot[0], mid, ot[2]}, d));
            made.push_back(add({mid, ot[1], ot[2]}, d));
        }
        return made;
    }
};

std::vector<Point> tri_points(const TriangleSoup& s, int t) {
    return {s.pts[s.tris[t][0]], s.pts[s.tris[t][1]], s.pts[s.tris[t][2]]};
}

// Builds C from straight segments: arrangement, triangulation, refinement,
// then installs the lists.
void finish(AugmentedSubdivision& aug, const std::vector<Segment>& c_segments,
            std::chrono::steady_clock::time_point start) {
    const BoundingBox& box = aug.box;
    std::vector<Segment> segs = c_segments;
    const Point p00 = box.min, p10{box.max.x, box.min.y}, p11 = box.max, p01{box.min.x, box.max.y};
    segs.insert(segs.begin(), {{p00, p10}, {p10, p11}, {p11, p01}, {p01, p00}});
    PlanarSubdivision c0 = build_arrangement({}, segs, aug.epsilon);
    SceneData sd = scene_data(aug);

    if (aug.curves.empty()) {
        aug.C = std::move(c0);
        std::vector<CellAnalysis> cells(aug.C.faces.size());
        for (int f = 0; f < static_cast<int>(aug.C.faces.size()); ++f) {
            if (f == aug.C.unbounded_face) continue;
            std::vector<Point> poly;
            for (int v : aug.C.outer_vertices(f)) poly.push_back(aug.C.vertices[v].p);
            cells[f] = analyze_cell(sd, poly);
        }
        install(aug, cells);
        aug.stats.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        return;
    }

    TriangleSoup soup;
    {
        PlanarSubdivision c1 = triangulate_cells(c0, 3);
        c0 = PlanarSubdivision{};
        for (const auto& v : c1.vertices) soup.pts.push_back(v.p);
        for (int f = 0; f < static_cast<int>(c1.faces.size()); ++f) {
            if (f == c1.unbounded_face) continue;
            const auto vs = c1.outer_vertices(f);
            soup.add({vs[0], vs[1], vs[2]}, 0);
        }
    }

    std::vector<CellAnalysis> result(soup.tris.size());
    std::deque<int> queue(soup.tris.size());
    std::iota(queue.begin(), queue.end(), 0);
    int bisections = 0, unresolved = 0;
    while (!queue.empty()) {
        const int t = queue.front();
        queue.pop_front();
        if (!soup.alive[t]) continue;
        CellAnalysis a = analyze_cell(sd, tri_points(soup, t));
        const bool good = a.chain_ok && !a.split;
        if (good || soup.depth[t] >= kMaxDepth) {
            if (!good) {
                ++unresolved;
                if (!a.chain_ok) {
                    // Keep a label so queries stay total; verification reports the cell.
                    const auto p = tri_points(soup, t);
                    a.chain.clear();
                    a.gap_samples.assign(1, (p[0] + p[1] + p[2]) * (1.0 / 3));
                }
            }
            if (static_cast<std::size_t>(t) >= result.size()) result.resize(soup.tris.size());
            result[t] = std::move(a);
            continue;
        }
        ++bisections;
        for (int n : soup.bisect(t)) queue.push_back(n);
    }

    // Final C with one face per live triangle.
    std::vector<std::pair<int, int>> edges;
    for (int t = 0; t < static_cast<int>(soup.tris.size()); ++t) {
        if (!soup.alive[t]) continue;
        const auto& tr = soup.tris[t];
        for (int i = 0; i < 3; ++i) edges.push_back({tr[i], tr[(i + 1) % 3]});
    }
    aug.C = subdivision_from_graph(soup.pts, edges, aug.epsilon);
    // Match faces to triangles by their directed first edge.
    std::unordered_map<std::uint64_t, int> tri_of;
    tri_of.reserve(soup.tris.size() * 3);
    for (int t = 0; t < static_cast<int>(soup.tris.size()); ++t) {
        if (!soup.alive[t]) continue;
        const auto& tr = soup.tris[t];
        for (int i = 0; i < 3; ++i) {
            tri_of[(static_cast<std::uint64_t>(static_cast<std::uint32_t>(tr[i])) << 32) |
                   static_cast<std::uint32_t>(tr[(i + 1) % 3])] = t;
        }
    }
    std::vector<CellAnalysis> cells(aug.C.faces.size());
    for (int f = 0; f < static_cast<int>(aug.C.faces.size()); ++f) {
        if (f == aug.C.unbounded_face) continue;
        const int h = aug.C.faces[f].outer;
        const auto key = (static_cast<std::uint64_t>(static_cast<std::uint32_t>(aug.C.half_edges[h].origin)) << 32) |
                         static_cast<std::uint32_t>(aug.C.dest(h));
        cells[f] = std::move(result[tri_of.at(key)]);
    }
    result.clear();
    install(aug, cells);
    aug.stats.bisections = bisections;
    aug.stats.unresolved_cells = unresolved;
    aug.stats.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

void check_homogeneous(const std::vector<Curve>& curves, bool want_disks) {
    for (const auto& c : curves) {
        c.validate();
        if (c.is_disk() != want_disks) {
            throw GeometryError(ErrorCode::UnsupportedScene, "scene mixes disks with arcs or segments");
        }
    }
}

}  // namespace

// ---------------------------------------------------------------- public API

std::optional<bool> in_chain_set(const Curve& curve, const ListEntry& e, const Point& q) {
    const Sign s = classify(curve, q, 0.0);
    if (s == Sign::On || s == Sign::OutsideSpan) return std::nullopt;
    return positive_sign(s) == e.positive;
}

std::vector<int> AugmentedSubdivision::cell_segments(int cell) const {
    std::vector<int> out = C.cycle(C.faces[cell].outer);
    std::sort(out.begin(), out.end(), [](int a, int b) { return a / 2 < b / 2; });
    return out;
}

CrossingList AugmentedSubdivision::crossing_list(int h) const {
    CrossingList l;
    l.segment = h / 2;
    l.cell = C.half_edges[h].face;
    const int m = chain_length(l.cell);
    for (int i = 0; i < m; ++i) l.entries.push_back(entry(l.cell, i));
    for (int i = 0; i <= m; ++i) l.gap_faces.push_back(gap_face(l.cell, i));
    if (!reversed.empty() && reversed[h]) {
        std::reverse(l.entries.begin(), l.entries.end());
        for (auto& e : l.entries) e.positive = !e.positive;
        std::reverse(l.gap_faces.begin(), l.gap_faces.end());
    }
    return l;
}

BoundingBox working_box(const std::vector<Curve>& curves) {
    BoundingBox b = BoundingBox::empty();
    for (const auto& c : curves) b.expand(bounding_box(c));
    if (b.is_empty()) return {{-1, -1}, {1, 1}};
    return b.inflated(0.1);
}

SceneKind scene_kind(const std::vector<Curve>& curves) {
    if (curves.empty()) return SceneKind::Disks;
    const bool disks = curves.front().is_disk();
    for (const auto& c : curves) {
        if (c.is_disk() != disks) throw GeometryError(ErrorCode::UnsupportedScene, "scene mixes curve types");
    }
    return disks ? SceneKind::Disks : SceneKind::Arcs;
}

std::vector<Segment> resolve_boxes(const std::vector<BoundingBox>& boxes, const std::vector<MonotonePiece>& pieces,
                                   const BoundingBox& wb, double epsilon) {
    const std::size_t n = boxes.size();
    // 0: intersecting, 1: disjoint only, 2: nested inside another box.
    std::vector<int> cls(n, 1);
    std::vector<int> encloser(n, -1);
    auto area = [](const BoundingBox& b) { return b.width() * b.height(); };
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            if (i == j || !boxes[i].intersects(boxes[j], epsilon)) continue;
            if (boxes[j].encloses(boxes[i]) && !(boxes[i] == boxes[j] && j > i)) {
                if (encloser[i] < 0 || area(boxes[j]) < area(boxes[encloser[i]])) encloser[i] = static_cast<int>(j);
            } else if (!boxes[i].encloses(boxes[j])) {
                cls[i] = 0;
            }
        }
        if (encloser[i] >= 0 && cls[i] != 0) cls[i] = 2;
    }
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        const auto& A = boxes[a];
        const auto& B = boxes[b];
        if (cls[a] != cls[b]) return cls[a] < cls[b];
        if (A.min.x != B.min.x) return A.min.x < B.min.x;
        if (A.min.y != B.min.y) return A.min.y < B.min.y;
        if (A.height() != B.height()) return A.height() < B.height();
        return a < b;
    });

    std::vector<Segment> out;
    auto push = [&](const Point& a, const Point& b) {
        if (dist(a, b) > epsilon) out.push_back({a, b});
    };
    for (std::size_t i : order) {
        const auto& b = boxes[i];
        // Vertical sides always reach the working box; horizontal sides of a
        // nested box stop at its enclosing box.
        const BoundingBox& e = encloser[i] >= 0 ? boxes[encloser[i]] : wb;
        for (double x : {b.min.x, b.max.x}) push({x, wb.min.y}, {x, wb.max.y});
        for (double y : {b.min.y, b.max.y}) push({e.min.x, y}, {e.max.x, y});
    }
    // One separating common tangent per pair of pieces with overlapping boxes.
    for (std::size_t oi = 0; oi < n; ++oi) {
        for (std::size_t oj = oi + 1; oj < n; ++oj) {
            const std::size_t i = order[oi], j = order[oj];
            if (pieces[i].parent == pieces[j].parent) continue;
            if (!boxes[i].intersects(boxes[j], epsilon)) continue;
            if (pieces[i].kind() == PieceKind::Circle || pieces[j].kind() == PieceKind::Circle) continue;
            std::vector<Tangent> ts;
            try {
                ts = common_tangents(pieces[i], pieces[j], wb, epsilon);
            } catch (const GeometryError&) {
                continue;
            }
            if (!ts.empty()) push(ts.front().touch1, ts.front().touch2);
        }
    }
    return out;
}

AugmentedSubdivision curve_monotone_subdivision(const std::vector<Curve>& curves, double epsilon) {
    const auto start = std::chrono::steady_clock::now();
    check_homogeneous(curves, false);
    AugmentedSubdivision aug;
    aug.kind = SceneKind::Arcs;
    aug.curves = curves;
    aug.epsilon = epsilon > 0 ? epsilon : scene_epsilon(curves);
    aug.box = working_box(curves);
    for (const auto& c : curves) {
        auto ps = monotone_decompose(c);
        aug.pieces.insert(aug.pieces.end(), ps.begin(), ps.end());
    }
    for (std::size_t i = 0; i < aug.pieces.size(); ++i) {
        for (std::size_t j = i + 1; j < aug.pieces.size(); ++j) {
            if (aug.pieces[i].parent == aug.pieces[j].parent) continue;
            if (!bounding_box(aug.pieces[i]).intersects(bounding_box(aug.pieces[j]), aug.epsilon)) continue;
            if (!intersect_pieces(aug.pieces[i], aug.pieces[j], aug.epsilon).empty()) {
                throw GeometryError(ErrorCode::NonDisjointInput, "curves " + std::to_string(aug.pieces[i].parent) +
                                                                     " and " + std::to_string(aug.pieces[j].parent) +
                                                                     " intersect");
            }
        }
    }

    // A: curves, full-height walls at every curve's x-extent, and the box.
    const BoundingBox& wb = aug.box;
    std::vector<Segment> a_segs{{wb.min, {wb.max.x, wb.min.y}},
                                {{wb.max.x, wb.min.y}, wb.max},
                                {wb.max, {wb.min.x, wb.max.y}},
                                {{wb.min.x, wb.max.y}, wb.min}};
    for (const auto& c : curves) {
        const BoundingBox b = bounding_box(c);
        for (double x : {b.min.x, b.max.x}) a_segs.push_back({{x, wb.min.y}, {x, wb.max.y}});
    }
    aug.A = build_arrangement(aug.pieces, a_segs, aug.epsilon);

    std::vector<BoundingBox> boxes;
    for (const auto& p : aug.pieces) boxes.push_back(bounding_box(p));
    std::vector<Segment> c_segs = resolve_boxes(boxes, aug.pieces, wb, aug.epsilon);
    for (const auto& s : c_segs) {
        // Box extensions are axis-parallel; the rest are tangents.
        if (s.a.x != s.b.x && s.a.y != s.b.y) aug.tangents.push_back(s);
    }
    for (const auto& c : curves) {
        if (const auto* s = std::get_if<SegmentCurve>(&c.shape)) c_segs.push_back({s->a, s->b});
    }
    finish(aug, c_segs, start);
    return aug;
}

AugmentedSubdivision disk_subdivision(const std::vector<Curve>& disks, double epsilon) {
    const auto start = std::chrono::steady_clock::now();
    check_homogeneous(disks, true);
    AugmentedSubdivision aug;
    aug.kind = SceneKind::Disks;
    aug.curves = disks;
    aug.epsilon = epsilon > 0 ? epsilon : scene_epsilon(disks);
    aug.box = working_box(disks);
    for (std::size_t i = 0; i < disks.size(); ++i) {
        for (std::size_t j = i + 1; j < disks.size(); ++j) {
            const auto& a = std::get<DiskCurve>(disks[i].shape);
            const auto& b = std::get<DiskCurve>(disks[j].shape);
            if (dist(a.center, b.center) <= aug.epsilon) {
                throw GeometryError(ErrorCode::InvalidInput, "disks " + std::to_string(disks[i].id) + " and " +
                                                                 std::to_string(disks[j].id) + " share a center");
            }
        }
    }
    for (const auto& c : disks) {
        auto ps = monotone_decompose(c);
        aug.pieces.insert(aug.pieces.end(), ps.begin(), ps.end());
    }
    const BoundingBox& wb = aug.box;
    aug.A = build_arrangement(aug.pieces, {}, aug.epsilon);

    std::vector<Segment> segs;
    for (std::size_t i = 0; i < disks.size(); ++i) {
        const auto& a = std::get<DiskCurve>(disks[i].shape);
        // Center to the four extreme points.
        for (int q = 0; q < 4; ++q) {
            const double t = q * std::numbers::pi / 2;
            segs.push_back({a.center, {a.center.x + a.radius * std::cos(t), a.center.y + a.radius * std::sin(t)}});
        }
        for (std::size_t j = i + 1; j < disks.size(); ++j) {
            const auto& b = std::get<DiskCurve>(disks[j].shape);
            segs.push_back({a.center, b.center});
            // Chord through the two intersection points.
            const Point delta = b.center - a.center;
            const double L = norm(delta);
            if (L < a.radius + b.radius && L > std::abs(a.radius - b.radius)) {
                const double x = (L * L + a.radius * a.radius - b.radius * b.radius) / (2 * L);
                const double h = std::sqrt(std::max(0.0, a.radius * a.radius - x * x));
                const Point u = delta * (1.0 / L), v{-u.y, u.x};
                segs.push_back({a.center + u * x + v * h, a.center + u * x - v * h});
            }
            for (const auto& t : common_tangents(disks[i], disks[j], wb)) {
                if (dist(t.touch1, t.touch2) <= aug.epsilon) continue;
                aug.tangents.push_back({t.touch1, t.touch2});
                segs.push_back({t.touch1, t.touch2});
            }
        }
    }
    finish(aug, segs, start);
    return aug;
}

AugmentedSubdivision build_subdivision(const std::vector<Curve>& curves, double epsilon) {
    return scene_kind(curves) == SceneKind::Disks ? disk_subdivision(curves, epsilon)
                                                  : curve_monotone_subdivision(curves, epsilon);
}

void build_crossing_lists(AugmentedSubdivision& aug) {
    SceneData sd = scene_data(aug);
    std::vector<CellAnalysis> cells(aug.C.faces.size());
    for (int f = 0; f < static_cast<int>(aug.C.faces.size()); ++f) {
        if (f == aug.C.unbounded_face) continue;
        std::vector<Point> poly;
        for (int v : aug.C.outer_vertices(f)) poly.push_back(aug.C.vertices[v].p);
        cells[f] = analyze_cell(sd, poly);
        if (!cells[f].chain_ok) {
            throw GeometryError(ErrorCode::AmbiguousOrder, "no valid order in cell " + std::to_string(f));
        }
    }
    install(aug, cells);
}

std::vector<std::string> verify_curve_monotone(const AugmentedSubdivision& aug, int samples_per_cell,
                                               std::uint64_t seed) {
    std::vector<std::string> report;
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    const PlanarSubdivision& C = aug.C;
    for (int f = 0; f < static_cast<int>(C.faces.size()); ++f) {
        if (f == C.unbounded_face) continue;
        const auto verts = C.outer_vertices(f);
        std::vector<Point> poly;
        for (int v : verts) poly.push_back(C.vertices[v].p);
        // Fan triangles weighted by area for uniform interior samples.
        std::vector<double> cum;
        double total = 0;
        for (std::size_t i = 1; i + 1 < poly.size(); ++i) {
            total += 0.5 * std::abs(cross(poly[i] - poly[0], poly[i + 1] - poly[0]));
            cum.push_back(total);
        }
        const auto segs = aug.cell_segments(f);
        Point centroid{0, 0};
        for (const auto& p : poly) centroid = centroid + p;
        centroid = centroid * (1.0 / static_cast<double>(poly.size()));
        std::vector<Point> pts;
        for (int k = 0; k < samples_per_cell; ++k) {
            const double r = u01(rng) * total;
            const std::size_t i = std::lower_bound(cum.begin(), cum.end(), r) - cum.begin() + 1;
            double a = u01(rng), b = u01(rng);
            if (a + b > 1) a = 1 - a, b = 1 - b;
            const std::size_t j = std::min(i, poly.size() - 2);
            pts.push_back(poly[0] + (poly[j] - poly[0]) * a + (poly[j + 1] - poly[0]) * b);
            // A point next to a boundary segment as well, nudged inside since
            // walls of arc scenes are sign boundaries themselves.
            const int h = segs[k % segs.size()];
            const Point on = C.origin_point(h) + (C.dest_point(h) - C.origin_point(h)) * u01(rng);
            pts.push_back(on + (centroid - on) * 1e-7);
        }
        std::string failure;
        for (int h : segs) {
            const CrossingList l = aug.crossing_list(h);
            for (const auto& p : pts) {
                const SignVector truth = sign_vector(aug.curves, p, aug.epsilon);
                if (has_on_flag(truth)) continue;
                const int m = static_cast<int>(l.entries.size());
                int k = 0;
                bool ok = true;
                for (int i = 0; i < m; ++i) {
                    const auto in = in_chain_set(aug.curves[l.entries[i].curve], l.entries[i], p);
                    if (!in) {
                        ok = false;
                        break;
                    }
                    if (*in) {
                        if (k != i) ok = false;
                        ++k;
                    }
                }
                if (!ok) {
                    failure = "order";
                } else if (aug.face_signs[l.gap_faces[k]] != truth) {
                    failure = "label";
                }
                if (!failure.empty()) {
                    report.push_back("cell " + std::to_string(f) + " segment " + std::to_string(h / 2) + ": " +
                                     failure + " mismatch at (" + std::to_string(p.x) + ", " +
                                     std::to_string(p.y) + ")");
                    break;
                }
            }
            if (!failure.empty()) break;
        }
    }
    return report;
}

}  // namespace curveloc
