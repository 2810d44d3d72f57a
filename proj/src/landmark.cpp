#include "curveloc/landmark.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

namespace curveloc {

namespace {

constexpr int kLeafSize = 8;

double coord(const Point& p, int axis) { return axis == 0 ? p.x : p.y; }

double dist2(const Point& a, const Point& b) {
    const Point d = a - b;
    return dot(d, d);
}

// Squared distance from p to a box (zero inside).
double box_dist2(const BoundingBox& b, const Point& p) {
    const double dx = std::max({b.min.x - p.x, 0.0, p.x - b.max.x});
    const double dy = std::max({b.min.y - p.y, 0.0, p.y - b.max.y});
    return dx * dx + dy * dy;
}

struct Best {
    double d2 = std::numeric_limits<double>::infinity();
    int id = -1;
    int evaluations = 0;

    void offer(const LandmarkIndex& idx, int id_, const Point& q) {
        ++evaluations;
        const double d = dist2(idx.landmarks[id_].p, q);
        if (d < d2 || (d == d2 && id_ < id)) {
            d2 = d;
            id = id_;
        }
    }
};

void kd_build(const LandmarkIndex& idx, std::vector<int>& order, int lo, int hi, int axis) {
    if (hi - lo <= kLeafSize) return;
    const int mid = (lo + hi) / 2;
    std::nth_element(order.begin() + lo, order.begin() + mid, order.begin() + hi, [&](int a, int b) {
        const double ca = coord(idx.landmarks[a].p, axis), cb = coord(idx.landmarks[b].p, axis);
        return ca < cb || (ca == cb && a < b);
    });
    kd_build(idx, order, lo, mid, 1 - axis);
    kd_build(idx, order, mid + 1, hi, 1 - axis);
}

void kd_search(const LandmarkIndex& idx, int lo, int hi, int axis, const Point& q, Best& best) {
    if (hi - lo <= kLeafSize) {
        for (int i = lo; i < hi; ++i) best.offer(idx, idx.kd_order[i], q);
        return;
    }
    const int mid = (lo + hi) / 2;
    const double split = coord(idx.landmarks[idx.kd_order[mid]].p, axis);
    const double diff = coord(q, axis) - split;
    best.offer(idx, idx.kd_order[mid], q);
    if (diff < 0) {
        kd_search(idx, lo, mid, 1 - axis, q, best);
        if (diff * diff <= best.d2) kd_search(idx, mid + 1, hi, 1 - axis, q, best);
    } else {
        kd_search(idx, mid + 1, hi, 1 - axis, q, best);
        if (diff * diff <= best.d2) kd_search(idx, lo, mid, 1 - axis, q, best);
    }
}

// Distance from the midpoint of edge e to the other boundary edges of its
// two faces; nothing else can be closer.
double clearance(const PlanarSubdivision& C, int e, const Point& m) {
    double best = std::numeric_limits<double>::infinity();
    for (int h : {2 * e, 2 * e + 1}) {
        const auto& face = C.faces[C.half_edges[h].face];
        std::vector<int> starts = face.inner;
        if (face.outer >= 0) starts.push_back(face.outer);
        for (int s : starts) {
            for (int g : C.cycle(s)) {
                if (g / 2 != e) best = std::min(best, C.distance(g, m));
            }
        }
    }
    return best;
}

std::vector<std::vector<int>> balanced_kmeans(const LandmarkIndex& idx, const std::vector<int>& ids, int k,
                                              std::mt19937_64& rng) {
    const int m = static_cast<int>(ids.size());
    const int capacity = (m + k - 1) / k;
    std::vector<int> pick(ids);
    for (int i = 0; i < k; ++i) std::swap(pick[i], pick[i + rng() % static_cast<std::uint64_t>(m - i)]);
    std::vector<Point> centers(k);
    for (int c = 0; c < k; ++c) centers[c] = idx.landmarks[pick[c]].p;

    std::vector<int> assign(m, -1);
    struct Pair {
        double d2;
        int i, c;
    };
    std::vector<Pair> pairs;
    pairs.reserve(static_cast<std::size_t>(m) * k);
    for (int iter = 0; iter < 50; ++iter) {
        pairs.clear();
        for (int i = 0; i < m; ++i)
            for (int c = 0; c < k; ++c) pairs.push_back({dist2(idx.landmarks[ids[i]].p, centers[c]), i, c});
        std::sort(pairs.begin(), pairs.end(), [](const Pair& a, const Pair& b) {
            if (a.d2 != b.d2) return a.d2 < b.d2;
            if (a.i != b.i) return a.i < b.i;
            return a.c < b.c;
        });
        std::vector<int> next(m, -1), load(k, 0);
        for (const auto& pr : pairs) {
            if (next[pr.i] >= 0 || load[pr.c] >= capacity) continue;
            next[pr.i] = pr.c;
            ++load[pr.c];
        }
        const bool stable = next == assign;
        assign = std::move(next);
        if (stable) break;
        std::vector<Point> sum(k);
        for (int i = 0; i < m; ++i) sum[assign[i]] = sum[assign[i]] + idx.landmarks[ids[i]].p;
        for (int c = 0; c < k; ++c) {
            if (load[c] > 0) centers[c] = sum[c] * (1.0 / load[c]);
        }
    }
    std::vector<std::vector<int>> out(k);
    for (int i = 0; i < m; ++i) out[assign[i]].push_back(ids[i]);
    std::erase_if(out, [](const std::vector<int>& v) { return v.empty(); });
    return out;
}

}  // namespace

LandmarkIndex build_landmarks(const PlanarSubdivision& C, double offset_fraction) {
    LandmarkIndex idx;
    idx.offset_fraction = offset_fraction;
    for (int e = 0; e < C.num_edges(); ++e) {
        const Point a = C.origin_point(2 * e), b = C.dest_point(2 * e);
        const double len = dist(a, b);
        if (len == 0) {
            ++idx.skipped_edges;
            continue;
        }
        const Point m = midpoint(a, b);
        const double delta = offset_fraction * std::min(len, clearance(C, e, m));
        // Left normal of half-edge 2e; its face lies on that side.
        const Point n{-(b.y - a.y) / len, (b.x - a.x) / len};
        idx.landmarks.push_back({m + n * delta, C.half_edges[2 * e].face, e});
        idx.landmarks.push_back({m - n * delta, C.half_edges[2 * e + 1].face, e});
        idx.pair_offset.push_back(delta);
    }
    idx.kd_order.resize(idx.landmarks.size());
    for (int i = 0; i < idx.size(); ++i) idx.kd_order[i] = i;
    kd_build(idx, idx.kd_order, 0, idx.size(), 0);
    return idx;
}

std::vector<int> mislabelled_landmarks(const PlanarSubdivision& C, const LandmarkIndex& idx) {
    const FaceLocator loc(C);
    std::vector<int> bad;
    for (int i = 0; i < idx.size(); ++i) {
        if (loc.locate(idx.landmarks[i].p) != idx.landmarks[i].face) bad.push_back(i);
    }
    return bad;
}

LandmarkHit landmark_locate(const LandmarkIndex& idx, const Point& q) {
    LandmarkHit hit;
    if (idx.landmarks.empty()) return hit;
    Best best;
    kd_search(idx, 0, idx.size(), 0, q, best);
    hit.landmark = best.id;
    hit.cell = idx.landmarks[best.id].face;
    hit.comparisons = best.evaluations;
    return hit;
}

int ClusterTree::depth() const {
    int best = 0;
    std::vector<std::pair<int, int>> stack{{0, 0}};
    while (!stack.empty() && !nodes.empty()) {
        auto [n, d] = stack.back();
        stack.pop_back();
        best = std::max(best, d);
        for (int c : nodes[n].children) stack.push_back({c, d + 1});
    }
    return best;
}

int ClusterTree::max_degree() const {
    std::size_t best = 0;
    for (const auto& n : nodes) best = std::max({best, n.children.size(), n.members.size()});
    return static_cast<int>(best);
}

ClusterTree build_cluster_tree(const LandmarkIndex& idx, int k, std::uint64_t seed) {
    if (k < 2) throw GeometryError(ErrorCode::InvalidInput, "k must be at least 2");
    if (k > idx.size()) {
        throw GeometryError(ErrorCode::KTooLarge,
                            "k = " + std::to_string(k) + " exceeds " + std::to_string(idx.size()) + " landmarks");
    }
    ClusterTree tree;
    tree.k = k;
    tree.seed = seed;
    std::mt19937_64 rng(seed);
    std::vector<std::vector<int>> pending;
    pending.emplace_back(idx.size());
    for (int i = 0; i < idx.size(); ++i) pending[0][i] = i;
    tree.nodes.emplace_back();
    // Breadth-first so node ids and rng draws follow a fixed order.
    for (std::size_t n = 0; n < tree.nodes.size(); ++n) {
        std::vector<int> ids = std::move(pending[n]);
        auto& node = tree.nodes[n];
        node.box = BoundingBox::empty();
        Point sum;
        for (int id : ids) {
            node.box.expand(idx.landmarks[id].p);
            sum = sum + idx.landmarks[id].p;
        }
        node.centroid = sum * (1.0 / static_cast<double>(ids.size()));
        if (static_cast<int>(ids.size()) <= k) {
            node.members = std::move(ids);
            continue;
        }
        auto clusters = balanced_kmeans(idx, ids, k, rng);
        for (auto& c : clusters) {
            tree.nodes[n].children.push_back(static_cast<int>(tree.nodes.size()));
            tree.nodes.emplace_back();
            pending.push_back(std::move(c));
        }
    }
    return tree;
}

std::vector<int> batch_locate(const LandmarkIndex& idx, const ClusterTree& tree, const std::vector<Point>& queries) {
    std::vector<int> out;
    out.reserve(queries.size());
    for (const Point& q : queries) {
        if (tree.nodes.empty() || idx.landmarks.empty()) {
            out.push_back(-1);
            continue;
        }
        Best best;
        // Route to a leaf by nearest centroid for a first candidate.
        int n = 0;
        while (!tree.nodes[n].children.empty()) {
            int next = tree.nodes[n].children.front();
            double nd = dist2(tree.nodes[next].centroid, q);
            for (int c : tree.nodes[n].children) {
                const double d = dist2(tree.nodes[c].centroid, q);
                if (d < nd) {
                    nd = d;
                    next = c;
                }
            }
            n = next;
        }
        for (int id : tree.nodes[n].members) best.offer(idx, id, q);
        // Re-check every cluster whose box could hold an equal or closer landmark.
        std::vector<int> stack{0};
        while (!stack.empty()) {
            const int v = stack.back();
            stack.pop_back();
            const auto& node = tree.nodes[v];
            if (v == n || box_dist2(node.box, q) > best.d2) continue;
            for (int id : node.members) best.offer(idx, id, q);
            for (int c : node.children) stack.push_back(c);
        }
        out.push_back(idx.landmarks[best.id].face);
    }
    return out;
}

}  // namespace curveloc
