#include "curveloc/point_location.hpp"

#include <algorithm>
#include <random>

namespace curveloc {

namespace {

using Node = TrapezoidalMap::Node;
using NodeKind = TrapezoidalMap::NodeKind;

// Trapezoids exist only during construction. A missing top or bottom is -1,
// as is a missing neighbour; leftp/rightp of -1 mean minus/plus infinity.
struct Trap {
    int top = -1, bottom = -1;
    int leftp = -1, rightp = -1;
    int ul = -1, ll = -1, ur = -1, lr = -1;
    int node = -1;
};

class Builder {
public:
    Builder(TrapezoidalMap& m) : map_(m) {
        traps_.push_back({});
        traps_[0].node = 0;
        map_.nodes.assign(1, Node{});
        map_.nodes[0].value = 0;
    }

    void insert(int s) {
        const int p = map_.segments[s][0], q = map_.segments[s][1];
        std::vector<int> delta{find_start(s)};
        while (before(traps_[delta.back()].rightp, q)) {
            const Trap& t = traps_[delta.back()];
            delta.push_back(orient(s, t.rightp) > 0 ? t.lr : t.ur);
        }
        if (delta.size() == 1) {
            split_single(s, delta[0], p, q);
        } else {
            split_many(s, delta, p, q);
        }
    }

    const std::vector<Trap>& traps() const { return traps_; }

private:
    TrapezoidalMap& map_;
    std::vector<Trap> traps_;

    const Point& pt(int i) const { return map_.points[i]; }
    int orient(int s, int v) const {
        return orient2d(pt(map_.segments[s][0]), pt(map_.segments[s][1]), pt(v));
    }
    // True when bound a (-1 is +infinity) is strictly left of vertex b.
    bool before(int a, int b) const { return a >= 0 && a != b && lex_less(pt(a), pt(b)); }

    int find_start(int s) const {
        const int p = map_.segments[s][0], q = map_.segments[s][1];
        int n = 0;
        while (map_.nodes[n].kind != NodeKind::Leaf) {
            const Node& nd = map_.nodes[n];
            if (nd.kind == NodeKind::X) {
                n = (nd.value != p && lex_less(pt(p), pt(nd.value))) ? nd.left : nd.right;
            } else {
                int o = orient(nd.value, p);
                if (o == 0) o = orient(nd.value, q);
                n = o > 0 ? nd.left : nd.right;
            }
        }
        return map_.nodes[n].value;
    }

    int new_trap(int top, int bottom, int leftp, int rightp) {
        Trap t;
        t.top = top;
        t.bottom = bottom;
        t.leftp = leftp;
        t.rightp = rightp;
        t.node = static_cast<int>(map_.nodes.size());
        map_.nodes.push_back({NodeKind::Leaf, static_cast<int>(traps_.size()), -1, -1});
        traps_.push_back(t);
        return static_cast<int>(traps_.size()) - 1;
    }

    int leaf(int t) const { return traps_[t].node; }
    int add_node(NodeKind k, int value, int left, int right) {
        map_.nodes.push_back({k, value, left, right});
        return static_cast<int>(map_.nodes.size()) - 1;
    }

    // Neighbour n had `old` as a right (or left) neighbour; point it at `now`.
    void relink_right(int n, int old, int now) {
        if (n < 0) return;
        if (traps_[n].ur == old) traps_[n].ur = now;
        if (traps_[n].lr == old) traps_[n].lr = now;
    }
    void relink_left(int n, int old, int now) {
        if (n < 0) return;
        if (traps_[n].ul == old) traps_[n].ul = now;
        if (traps_[n].ll == old) traps_[n].ll = now;
    }

    // Left end of the new segment inside trapezoid d0: returns the node that
    // replaces d0's leaf, given the node for the part right of p.
    Node attach_left(int d0, int p, int up, int low, const Node& inner) {
        const Trap d = traps_[d0];
        if (d.leftp != p) {
            const int a = new_trap(d.top, d.bottom, d.leftp, p);
            traps_[a].ul = d.ul;
            traps_[a].ll = d.ll;
            traps_[a].ur = up;
            traps_[a].lr = low;
            relink_right(d.ul, d0, a);
            relink_right(d.ll, d0, a);
            traps_[up].ul = a;
            traps_[up].ll = -1;
            traps_[low].ll = a;
            traps_[low].ul = -1;
            const int in = add_node(inner.kind, inner.value, inner.left, inner.right);
            return {NodeKind::X, p, leaf(a), in};
        }
        traps_[up].ul = d.ul;
        traps_[up].ll = -1;
        traps_[low].ll = d.ll;
        traps_[low].ul = -1;
        relink_right(d.ul, d0, up);
        relink_right(d.ll, d0, low);
        return inner;
    }

    Node attach_right(int dk, int q, int up, int low, const Node& inner) {
        const Trap d = traps_[dk];
        if (d.rightp != q) {
            const int b = new_trap(d.top, d.bottom, q, d.rightp);
            traps_[b].ur = d.ur;
            traps_[b].lr = d.lr;
            traps_[b].ul = up;
            traps_[b].ll = low;
            relink_left(d.ur, dk, b);
            relink_left(d.lr, dk, b);
            traps_[up].ur = b;
            traps_[up].lr = -1;
            traps_[low].lr = b;
            traps_[low].ur = -1;
            const int in = add_node(inner.kind, inner.value, inner.left, inner.right);
            return {NodeKind::X, q, in, leaf(b)};
        }
        traps_[up].ur = d.ur;
        traps_[up].lr = -1;
        traps_[low].lr = d.lr;
        traps_[low].ur = -1;
        relink_left(d.ur, dk, up);
        relink_left(d.lr, dk, low);
        return inner;
    }

    void split_single(int s, int d0, int p, int q) {
        const Trap d = traps_[d0];
        const int up = new_trap(d.top, s, p, q);
        const int low = new_trap(s, d.bottom, p, q);
        const Node y{NodeKind::Y, s, leaf(up), leaf(low)};
        // attach_left reads d0's left links, which attach_right leaves alone.
        map_.nodes[d.node] = attach_left(d0, p, up, low, attach_right(d0, q, up, low, y));
    }

    void split_many(int s, const std::vector<int>& delta, int p, int q) {
        const int k = static_cast<int>(delta.size()) - 1;
        std::vector<int> upper(delta.size()), lower(delta.size());
        upper[0] = new_trap(traps_[delta[0]].top, s, p, -1);
        lower[0] = new_trap(s, traps_[delta[0]].bottom, p, -1);
        for (int j = 1; j <= k; ++j) {
            const Trap prev = traps_[delta[j - 1]];
            const Trap cur = traps_[delta[j]];
            const int r = prev.rightp;
            if (orient(s, r) > 0) {
                const int u0 = upper[j - 1];
                const int u1 = new_trap(cur.top, s, r, -1);
                traps_[u0].rightp = r;
                traps_[u0].ur = prev.ur;
                traps_[u0].lr = u1;
                relink_left(prev.ur, delta[j - 1], u0);
                traps_[u1].ll = u0;
                traps_[u1].ul = cur.ul;
                relink_right(cur.ul, delta[j], u1);
                upper[j] = u1;
                lower[j] = lower[j - 1];
            } else {
                const int l0 = lower[j - 1];
                const int l1 = new_trap(s, cur.bottom, r, -1);
                traps_[l0].rightp = r;
                traps_[l0].lr = prev.lr;
                traps_[l0].ur = l1;
                relink_left(prev.lr, delta[j - 1], l0);
                traps_[l1].ul = l0;
                traps_[l1].ll = cur.ll;
                relink_right(cur.ll, delta[j], l1);
                lower[j] = l1;
                upper[j] = upper[j - 1];
            }
        }
        traps_[upper[k]].rightp = q;
        traps_[lower[k]].rightp = q;

        std::vector<Node> replacement(delta.size());
        for (int j = 0; j <= k; ++j) replacement[j] = {NodeKind::Y, s, leaf(upper[j]), leaf(lower[j])};
        replacement[k] = attach_right(delta[k], q, upper[k], lower[k], replacement[k]);
        replacement[0] = attach_left(delta[0], p, upper[0], lower[0], replacement[0]);
        for (int j = 0; j <= k; ++j) map_.nodes[traps_[delta[j]].node] = replacement[j];
    }
};

}  // namespace

int TrapezoidalMap::depth() const {
    if (nodes.empty()) return 0;
    std::vector<int> d(nodes.size(), 0);
    int best = 0;
    // Children always have larger indices than the node that was overwritten
    // into their parent, except for reused leaf slots; a DFS is simplest.
    std::vector<std::pair<int, int>> stack{{0, 0}};
    std::vector<int> seen(nodes.size(), -1);
    while (!stack.empty()) {
        auto [n, depth] = stack.back();
        stack.pop_back();
        if (seen[n] >= depth) continue;
        seen[n] = depth;
        const Node& nd = nodes[n];
        if (nd.kind == NodeKind::Leaf) {
            best = std::max(best, depth);
            continue;
        }
        stack.push_back({nd.left, depth + 1});
        stack.push_back({nd.right, depth + 1});
    }
    return best;
}

TrapezoidalMap build_trapezoidal_map(const PlanarSubdivision& sub, const BoundingBox& box, std::uint64_t seed) {
    TrapezoidalMap map;
    map.seed = seed;
    map.box = box;
    map.points.reserve(sub.vertices.size());
    for (const auto& v : sub.vertices) map.points.push_back(v.p);
    const int ne = sub.num_edges();
    map.segments.reserve(ne);
    for (int e = 0; e < ne; ++e) {
        int a = sub.half_edges[2 * e].origin, b = sub.half_edges[2 * e + 1].origin;
        if (lex_less(map.points[b], map.points[a])) std::swap(a, b);
        map.segments.push_back({a, b});
    }

    std::vector<int> order(ne);
    for (int i = 0; i < ne; ++i) order[i] = i;
    std::mt19937_64 rng(seed);
    for (int i = ne - 1; i > 0; --i) std::swap(order[i], order[rng() % static_cast<std::uint64_t>(i + 1)]);

    std::vector<Trap> traps;
    {
        Builder b(map);
        for (int s : order) b.insert(s);
        traps = b.traps();
    }

    // Leaves now hold trapezoid ids; replace them with cells. The face below
    // a top segment is the face of its right-to-left half-edge.
    int alive = 0;
    for (auto& nd : map.nodes) {
        if (nd.kind != NodeKind::Leaf) continue;
        const Trap& t = traps[nd.value];
        if (t.top < 0) {
            nd.value = sub.unbounded_face;
        } else {
            const int h = 2 * t.top;
            const bool forward = sub.half_edges[h].origin == map.segments[t.top][0];
            nd.value = sub.half_edges[forward ? h + 1 : h].face;
        }
        ++alive;
    }
    map.trapezoids = alive;
    return map;
}

TrapLocation trap_locate(const TrapezoidalMap& map, const Point& q) {
    if (!map.box.contains(q)) throw GeometryError(ErrorCode::OutsideWorkingBox, "query outside the working box");
    TrapLocation r;
    int n = 0;
    while (map.nodes[n].kind != NodeKind::Leaf) {
        const Node& nd = map.nodes[n];
        ++r.comparisons;
        if (nd.kind == NodeKind::X) {
            const Point& p = map.points[nd.value];
            if (q == p) r.on_boundary = true;
            n = lex_less(q, p) ? nd.left : nd.right;
        } else {
            const auto& s = map.segments[nd.value];
            const int o = orient2d(map.points[s[0]], map.points[s[1]], q);
            if (o == 0) r.on_boundary = true;
            n = o >= 0 ? nd.left : nd.right;
        }
    }
    r.cell = map.nodes[n].value;
    return r;
}

int search_list(const AugmentedSubdivision& sub, int h, const Point& q, int& comparisons, bool& on_boundary) {
    const int cell = sub.C.half_edges[h].face;
    const int m = sub.chain_length(cell);
    const bool rev = !sub.reversed.empty() && sub.reversed[h];
    int lo = 0, hi = m;
    while (lo < hi) {
        const int mid = (lo + hi) / 2;
        ListEntry e = sub.entry(cell, rev ? m - 1 - mid : mid);
        if (rev) e.positive = !e.positive;
        ++comparisons;
        const Curve& curve = sub.curves[e.curve];
        const auto in = in_chain_set(curve, e, q);
        if (!in || classify(curve, q, sub.epsilon) == Sign::On) on_boundary = true;
        if (in.value_or(false)) {
            lo = mid + 1;
        } else {
            hi = mid;
        }
    }
    return sub.gap_face(cell, rev ? m - lo : lo);
}

AugmentedIndex preprocess(const std::vector<Curve>& curves, std::uint64_t seed, double epsilon) {
    AugmentedIndex idx;
    idx.sub = build_subdivision(curves, epsilon);
    idx.map = build_trapezoidal_map(idx.sub.C, idx.sub.box, seed);
    return idx;
}

QueryResult locate_in_cell(const AugmentedIndex& index, int cell, const Point& q, bool debug) {
    const auto& sub = index.sub;
    QueryResult r;
    r.cell = cell;
    if (cell < 0 || cell == sub.C.unbounded_face) {
        r.face = sub.A.unbounded_face;
        r.signs = sub.face_signs[r.face];
        return r;
    }
    const auto segs = sub.cell_segments(cell);
    r.face = search_list(sub, segs.front(), q, r.comparisons, r.on_boundary);
    if (debug) {
        for (std::size_t i = 1; i < segs.size(); ++i) {
            int c = 0;
            bool on = false;
            const int f = search_list(sub, segs[i], q, c, on);
            if (f != r.face && !on && !r.on_boundary) {
                throw GeometryError(ErrorCode::AmbiguousOrder, "lists of cell " + std::to_string(cell) + " disagree");
            }
        }
    }
    r.signs = sub.face_signs[r.face];
    return r;
}

QueryResult locate(const AugmentedIndex& index, const Point& q, bool debug) {
    TrapLocation t;
    try {
        t = trap_locate(index.map, q);
    } catch (const GeometryError&) {
        QueryResult r = locate_in_cell(index, -1, q);
        r.comparisons = 1;  // the box test
        return r;
    }
    QueryResult r = locate_in_cell(index, t.cell, q, debug);
    r.comparisons += t.comparisons;
    return r;
}

QueryResult locate_landmark(const AugmentedIndex& index, const Point& q) {
    if (!index.landmarks) throw GeometryError(ErrorCode::InvalidInput, "index has no landmarks");
    if (!index.sub.box.contains(q)) {
        QueryResult r = locate_in_cell(index, -1, q);
        r.comparisons = 1;
        return r;
    }
    const LandmarkHit hit = landmark_locate(*index.landmarks, q);
    QueryResult r = locate_in_cell(index, hit.cell, q);
    r.comparisons += hit.comparisons;
    return r;
}

}  // namespace curveloc
