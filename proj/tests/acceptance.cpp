// Acceptance run: one PASS/FAIL line per criterion.
// Usage: acceptance <data dir> <golden dir>

#include "curveloc/oracle.hpp"
#include "curveloc/render.hpp"
#include "curveloc/scene.hpp"
#include "curveloc/serialize.hpp"
#include "curveloc/validate.hpp"

#include <sys/resource.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

using namespace curveloc;

namespace {

using Clock = std::chrono::steady_clock;

double since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

std::string fmt(const char* f, auto... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

struct Outcome {
    bool pass = true;
    std::string detail;
};

AugmentedIndex build(const std::vector<Curve>& curves, std::uint64_t seed = 42) {
    AugmentedIndex idx = preprocess(curves, seed);
    idx.landmarks = build_landmarks(idx.sub.C);
    return idx;
}

std::vector<Curve> disk_scene(int i) { return random_disks(1 + i % 8, 1000 + i); }
std::vector<Curve> arc_scene(int i) { return random_arcs(1 + i % 8, 2000 + i); }

std::vector<Point> box_points(const BoundingBox& b, int count, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> ux(b.min.x, b.max.x), uy(b.min.y, b.max.y);
    std::vector<Point> out;
    for (int i = 0; i < count; ++i) {
        const double x = ux(rng);
        out.push_back({x, uy(rng)});
    }
    return out;
}

bool near_curve(const AugmentedSubdivision& sub, const Point& q) {
    for (const auto& c : sub.curves) {
        if (classify(c, q, sub.epsilon) == Sign::On) return true;
    }
    return false;
}

long peak_rss_bytes() {
    rusage u{};
    getrusage(RUSAGE_SELF, &u);
    return u.ru_maxrss * 1024L;
}

long mem_available_bytes() {
    std::ifstream f("/proc/meminfo");
    std::string key;
    long kb = 0;
    std::string unit;
    while (f >> key >> kb >> unit) {
        if (key == "MemAvailable:") return kb * 1024L;
    }
    return -1;
}

Outcome oracle_equivalence(const std::function<std::vector<Curve>(int)>& scene) {
    const auto t0 = Clock::now();
    long checked = 0, agreed = 0, face_fail = 0;
    for (int i = 0; i < 100; ++i) {
        const AugmentedIndex idx = preprocess(scene(i), 42);
        const auto rep = validate_index(idx, Method::Trap, 1000, 7000 + i);
        checked += rep.checked();
        agreed += rep.agreed;
        face_fail += rep.face_identity_failures;
    }
    const double secs = since(t0);
    Outcome o;
    o.pass = agreed == checked && secs < 60;
    o.detail = fmt("100 scenes, %ld queries checked, %ld agree, face identity failures %ld, %.1f s", checked, agreed,
                   face_fail, secs);
    return o;
}

Outcome comparisons_growth() {
    constexpr double a = 4, b = 16;
    const double step_limit = a * std::log2(24.0) + b;
    Outcome o;
    std::vector<int> worst;
    std::vector<long long> sizes;
    for (int n : {4, 8, 16, 32, 64}) {
        if (n == 64) {
            const double per_s = static_cast<double>(peak_rss_bytes()) / static_cast<double>(sizes.back());
            const double s64 = static_cast<double>(sizes.back()) * sizes.back() / sizes[sizes.size() - 2];
            const double need = per_s * s64;
            const long avail = mem_available_bytes();
            if (avail >= 0 && need > static_cast<double>(avail)) {
                o.pass = false;
                o.detail += fmt(" n=64 not run: projected S=%.3g needs %.1f GB, %.1f GB available;", s64, need / 1e9,
                                avail / 1e9);
                break;
            }
        }
        const AugmentedIndex idx = preprocess(random_disks(n, 42), 42);
        int w = 0;
        for (const Point& q : box_points(idx.sub.box, 1000, 42)) w = std::max(w, locate(idx, q).comparisons);
        const long long s = idx.sub.stats.size;
        const double bound = a * std::log2(static_cast<double>(s)) + b;
        o.pass = o.pass && w <= bound;
        if (!worst.empty() && w - worst.back() > step_limit) o.pass = false;
        worst.push_back(w);
        sizes.push_back(s);
        o.detail += fmt(" n=%d S=%lld max=%d bound=%.1f;", n, s, w, bound);
    }
    o.detail += fmt(" step limit %.1f", step_limit);
    return o;
}

Outcome size_growth() {
    Outcome o;
    std::vector<double> ln, ls;
    double prev = 0;
    for (int n : {4, 8, 16}) {
        const double s = static_cast<double>(build_subdivision(random_disks(n, 42)).stats.size);
        if (prev > 0) {
            o.pass = o.pass && s / prev <= 24;
            o.detail += fmt(" ratio %.2f;", s / prev);
        }
        o.detail += fmt(" S(%d)=%.0f;", n, s);
        prev = s;
        ln.push_back(std::log(n));
        ls.push_back(std::log(s));
    }
    const double mx = (ln[0] + ln[1] + ln[2]) / 3, my = (ls[0] + ls[1] + ls[2]) / 3;
    double sxy = 0, sxx = 0;
    for (int i = 0; i < 3; ++i) {
        sxy += (ln[i] - mx) * (ls[i] - my);
        sxx += (ln[i] - mx) * (ln[i] - mx);
    }
    o.detail += fmt(" fitted exponent %.2f", sxy / sxx);
    return o;
}

Outcome tangent_count() {
    Outcome o;
    int scenes = 0;
    for (int i = 0; i < 30; ++i) {
        const int n = 2 + i % 7;
        const auto sub = build_subdivision(random_disjoint_disks(n, 3000 + i));
        const std::size_t want = 4 * static_cast<std::size_t>(n * (n - 1) / 2);
        if (sub.tangents.size() != want) {
            o.pass = false;
            o.detail += fmt(" scene %d: n=%d got %zu;", i, n, sub.tangents.size());
        }
        ++scenes;
    }
    o.detail += fmt(" %d disjoint scenes, n 2..8", scenes);
    return o;
}

Outcome landmarks(const char* log_path) {
    Outcome o;
    std::ofstream log(log_path);
    long total = 0, agree = 0, same_signs = 0;
    int count_errors = 0;
    for (int i = 0; i < 40; ++i) {
        const AugmentedIndex idx = build(i % 2 ? arc_scene(i) : disk_scene(i));
        const auto& C = idx.sub.C;
        if (idx.landmarks->size() != 2 * C.num_edges()) ++count_errors;
        for (const Point& q : box_points(idx.sub.box, 1000, 8000 + i)) {
            if (near_curve(idx.sub, q)) continue;
            const TrapLocation t = trap_locate(idx.map, q);
            if (t.on_boundary) continue;
            const LandmarkHit h = landmark_locate(*idx.landmarks, q);
            ++total;
            same_signs += locate_landmark(idx, q).signs == locate(idx, q).signs;
            if (h.cell == t.cell) {
                ++agree;
            } else {
                log << fmt("scene=%d x=%.17g y=%.17g trap=%d landmark=%d via=%d\n", i, q.x, q.y, t.cell, h.cell,
                           h.landmark);
            }
        }
    }
    const double rate = total ? static_cast<double>(agree) / total : 1.0;
    o.pass = count_errors == 0 && rate >= 0.999;
    o.detail = fmt("count errors %d; cell agreement %.4f over %ld queries (sign vectors %.4f); %ld disagreements "
                   "logged to %s",
                   count_errors, rate, total, static_cast<double>(same_signs) / std::max(total, 1L), total - agree,
                   log_path);
    return o;
}

Outcome cluster_trees() {
    Outcome o;
    int trees = 0, batch_diff = 0;
    for (int i = 0; i < 10; ++i) {
        const AugmentedIndex idx = build(i % 2 ? arc_scene(i + 3) : disk_scene(i + 3));
        const auto& lm = *idx.landmarks;
        const auto queries = box_points(idx.sub.box, 1000, 9000 + i);
        for (int k : {2, 4, 8}) {
            if (k > lm.size()) continue;
            const ClusterTree tree = build_cluster_tree(lm, k, 42);
            const int limit = static_cast<int>(std::ceil(std::log(lm.size()) / std::log(k) - 1e-12)) + 1;
            if (tree.max_degree() > k + 1 || tree.depth() > limit) {
                o.pass = false;
                o.detail += fmt(" scene %d k=%d degree %d depth %d limit %d;", i, k, tree.max_degree(), tree.depth(),
                                limit);
            }
            const auto cells = batch_locate(lm, tree, queries);
            for (std::size_t j = 0; j < queries.size(); ++j) {
                if (cells[j] != landmark_locate(lm, queries[j]).cell) ++batch_diff;
            }
            ++trees;
        }
    }
    o.pass = o.pass && batch_diff == 0;
    o.detail += fmt(" %d trees, batch differences %d", trees, batch_diff);
    return o;
}

std::vector<AugmentedSubdivision> structural_scenes() {
    std::vector<AugmentedSubdivision> out;
    for (int i = 0; i < 20; ++i) out.push_back(build_subdivision(disk_scene(i)));
    for (int i = 0; i < 20; ++i) out.push_back(build_subdivision(arc_scene(i)));
    return out;
}

bool euler_holds(const PlanarSubdivision& s) {
    const int v = static_cast<int>(s.vertices.size()), f = static_cast<int>(s.faces.size());
    return v - s.num_edges() + f == 1 + connected_components(s);
}

Outcome structural(const std::vector<AugmentedSubdivision>& subs) {
    Outcome o;
    int dcel = 0, euler = 0;
    for (const auto& s : subs) {
        for (const PlanarSubdivision* p : {&s.C, &s.A}) {
            if (!validate_dcel(*p).empty()) ++dcel;
            if (!euler_holds(*p)) ++euler;
        }
    }
    const auto two = build_subdivision({make_disk(0, {0, 0}, 2), make_disk(1, {2, 0.5}, 2)});
    const int faces = static_cast<int>(two.A.faces.size());
    o.pass = dcel == 0 && euler == 0 && faces == 4;
    o.detail = fmt("%zu subdivisions: dcel failures %d, euler failures %d; two circles give %d faces", 2 * subs.size(),
                   dcel, euler, faces);
    return o;
}

Outcome curve_monotone(const std::vector<AugmentedSubdivision>& subs) {
    Outcome o;
    std::size_t bad = 0;
    for (const auto& s : subs) bad += verify_curve_monotone(s, 100).size();
    o.pass = bad == 0;
    o.detail = fmt("%zu subdivisions, %zu failing cells", subs.size(), bad);
    return o;
}

std::string read_file(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

Outcome determinism(const std::string& data, const std::string& golden) {
    Outcome o;
    int diffs = 0;
    for (int i = 0; i < 10; ++i) {
        const auto curves = i % 2 ? arc_scene(i) : disk_scene(i);
        if (serialize(build(curves, 5)) != serialize(build(curves, 5))) ++diffs;
    }
    struct Golden {
        const char* scene;
        Layer layer;
        const char* file;
    };
    int svg_diffs = 0;
    for (const Golden& g : {Golden{"two_disks", Layer::Subdivision, "two_disks_subdivision.svg"},
                            Golden{"two_disks", Layer::Arrangement, "two_disks_arrangement.svg"},
                            Golden{"arcs", Layer::Subdivision, "arcs_subdivision.svg"},
                            Golden{"arcs", Layer::Landmarks, "arcs_landmarks.svg"}}) {
        const Scene sc = load_scene(data + "/" + g.scene + ".scene");
        const std::string svg = render_svg(build(sc.curves, 42), g.layer);
        if (svg != read_file(golden + "/" + g.file)) {
            ++svg_diffs;
            o.detail += fmt(" %s differs;", g.file);
        }
    }
    o.pass = diffs == 0 && svg_diffs == 0;
    o.detail += fmt(" 10 rebuilds, %d serialization differences; %d golden differences", diffs, svg_diffs);
    return o;
}

}  // namespace

int main(int argc, char** argv) {
    if (argc < 3) {
        std::fprintf(stderr, "usage: acceptance <data dir> <golden dir>\n");
        return 2;
    }
    const std::string data = argv[1], golden = argv[2];
    int failed = 0;
    auto report = [&](int id, const char* name, const Outcome& o) {
        std::printf("%s %2d %s:%s%s\n", o.pass ? "PASS" : "FAIL", id, name, o.detail.empty() || o.detail[0] == ' ' ? "" : " ",
                    o.detail.c_str());
        std::fflush(stdout);
        failed += !o.pass;
    };
    auto guarded = [&](int id, const char* name, const std::function<Outcome()>& f) {
        try {
            report(id, name, f());
        } catch (const std::exception& e) {
            report(id, name, Outcome{false, std::string("exception: ") + e.what()});
        }
    };

    guarded(1, "oracle equivalence, disks", [] { return oracle_equivalence(disk_scene); });
    guarded(2, "oracle equivalence, arcs", [] { return oracle_equivalence(arc_scene); });
    guarded(3, "query comparisons", comparisons_growth);
    guarded(4, "size growth", size_growth);
    guarded(5, "tangent count", tangent_count);
    guarded(6, "landmarks", [] { return landmarks("landmark_disagreements.txt"); });
    guarded(7, "cluster tree", cluster_trees);
    std::vector<AugmentedSubdivision> subs;
    guarded(8, "structure", [&] {
        subs = structural_scenes();
        return structural(subs);
    });
    guarded(9, "curve monotone", [&] { return curve_monotone(subs); });
    guarded(10, "determinism", [&] { return determinism(data, golden); });
    std::printf("%d of 10 criteria failed\n", failed);
    return failed ? 1 : 0;
}
