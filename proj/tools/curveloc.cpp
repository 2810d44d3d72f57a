// Command-line front end: build, query, validate, render, bench.

#include "curveloc/render.hpp"
#include "curveloc/scene.hpp"
#include "curveloc/serialize.hpp"
#include "curveloc/validate.hpp"

#include "CLI11.hpp"

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>

using namespace curveloc;

namespace {

enum Exit { kOk = 0, kMismatch = 1, kBadInput = 2, kUnsupported = 3 };

std::uint64_t default_seed() {
    const char* env = std::getenv("CURVELOC_SEED");
    if (!env || !*env) return 42;
    char* end = nullptr;
    const unsigned long long v = std::strtoull(env, &end, 10);
    if (*end != '\0') throw GeometryError(ErrorCode::InvalidInput, "CURVELOC_SEED is not an integer");
    return v;
}

std::string signs_text(const SignVector& v) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + std::string(to_string(v[i]));
    return s;
}

std::string num(double v, const char* f = "%.6g") {
    char buf[64];
    std::snprintf(buf, sizeof buf, f, v);
    return buf;
}

void write_file(const std::string& path, const std::string& data) {
    std::ofstream f(path, std::ios::binary);
    f << data;
    if (!f) throw GeometryError(ErrorCode::InvalidInput, "cannot write " + path);
}

AugmentedIndex build_index(const Scene& scene, std::uint64_t seed) {
    AugmentedIndex idx = preprocess(scene.curves, seed, scene.epsilon.value_or(0));
    idx.landmarks = build_landmarks(idx.sub.C);
    return idx;
}

int cmd_build(const std::string& scene_path, const std::string& out, std::uint64_t seed) {
    const Scene scene = load_scene(scene_path);
    const AugmentedIndex idx = build_index(scene, seed);
    save_index(idx, out);
    const auto& st = idx.sub.stats;
    std::cout << "scene_kind: " << to_string(idx.sub.kind) << "\n"
              << "curves: " << idx.sub.curves.size() << "\n"
              << "seed: " << seed << "\n"
              << "S: " << st.size << "\n"
              << "C_max: " << st.max_cell_complexity << "\n"
              << "cells: " << st.cells << "\n"
              << "list_entries: " << st.list_entries << "\n"
              << "bisections: " << st.bisections << "\n"
              << "unresolved_cells: " << st.unresolved_cells << "\n"
              << "trapezoids: " << idx.map.trapezoids << "\n"
              << "dag_nodes: " << idx.map.nodes.size() << "\n"
              << "landmarks: " << idx.landmarks->size() << "\n";
    // Wall-clock time varies run to run, so it stays off stdout.
    std::cerr << "T: " << num(st.seconds) << "\n";
    return kOk;
}

int cmd_query(const std::string& index_path, const std::string& points_path, const std::string& method) {
    const AugmentedIndex idx = load_index(index_path);
    std::ifstream in(points_path);
    if (!in) throw GeometryError(ErrorCode::InvalidInput, "cannot read " + points_path);
    std::ostringstream out;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (const auto h = line.find('#'); h != std::string::npos) line.resize(h);
        std::istringstream ls(line);
        double x = 0, y = 0;
        std::string extra;
        if (!(ls >> x)) {
            if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
            throw GeometryError(ErrorCode::InvalidInput, "line " + std::to_string(line_no) + ": expected \"x y\"");
        }
        if (!(ls >> y) || (ls >> extra) || !std::isfinite(x) || !std::isfinite(y))
            throw GeometryError(ErrorCode::InvalidInput, "line " + std::to_string(line_no) + ": expected \"x y\"");
        const QueryResult r = method == "landmark" ? locate_landmark(idx, {x, y}) : locate(idx, {x, y});
        out << "face=" << r.face << " cell=" << r.cell << " signs=" << signs_text(r.signs)
            << " on_boundary=" << (r.on_boundary ? "true" : "false") << " comparisons=" << r.comparisons << "\n";
    }
    std::cout << out.str();
    return kOk;
}

int cmd_validate(const std::string& scene_path, int samples, std::uint64_t seed, const std::string& method) {
    const Scene scene = load_scene(scene_path);
    const AugmentedIndex idx = build_index(scene, seed);
    bool ok = true;
    for (Method m : {Method::Trap, Method::Landmark}) {
        if (method != "both" && method != to_string(m)) continue;
        const auto rep = validate_index(idx, m, samples, seed);
        std::cout << format_report(rep);
        ok = ok && rep.ok();
    }
    return ok ? kOk : kMismatch;
}

int cmd_render(const std::string& scene_path, const std::string& out, const std::string& layer, std::uint64_t seed) {
    const Scene scene = load_scene(scene_path);
    const AugmentedIndex idx = build_index(scene, seed);
    Layer l = Layer::Subdivision;
    if (layer == "arrangement") l = Layer::Arrangement;
    if (layer == "landmarks") l = Layer::Landmarks;
    write_file(out, render_svg(idx, l));
    return kOk;
}

int cmd_bench(const std::string& type, const std::vector<int>& sizes, int queries, std::uint64_t seed) {
    std::printf("%6s %12s %6s %8s %9s %10s %8s\n", "n", "S", "C_max", "max_cmp", "mean_cmp", "build_s", "unres");
    for (int n : sizes) {
        if (n < 0) throw GeometryError(ErrorCode::InvalidInput, "sizes must be non-negative");
        const auto curves = type == "arcs" ? random_arcs(n, seed) : random_disks(n, seed);
        const auto t0 = std::chrono::steady_clock::now();
        const AugmentedIndex idx = preprocess(curves, seed);
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        std::mt19937_64 rng(seed);
        const auto& b = idx.sub.box;
        std::uniform_real_distribution<double> ux(b.min.x, b.max.x), uy(b.min.y, b.max.y);
        long long total = 0;
        int worst = 0;
        for (int i = 0; i < queries; ++i) {
            const double x = ux(rng);
            const QueryResult r = locate(idx, {x, uy(rng)});
            total += r.comparisons;
            worst = std::max(worst, r.comparisons);
        }
        std::printf("%6d %12lld %6d %8d %9.2f %10.3f %8d\n", n, idx.sub.stats.size, idx.sub.stats.max_cell_complexity,
                    worst, queries ? static_cast<double>(total) / queries : 0.0, secs, idx.sub.stats.unresolved_cells);
        std::fflush(stdout);
    }
    return kOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Point location in arrangements of disks and parabola arcs"};
    app.require_subcommand(1);
    std::string scene, out, index, points, method = "trap", layer = "subdivision", type = "disks";
    std::string validate_method = "both";
    std::optional<std::uint64_t> seed;
    int samples = 1000, queries = 1000;
    std::vector<int> sizes{4, 8, 16, 32};

    auto* build = app.add_subcommand("build", "Build an index and write it to a file");
    build->add_option("--scene", scene, "Scene file")->required();
    build->add_option("--out", out, "Index file to write")->required();
    build->add_option("--seed", seed, "Seed for the trapezoidal map");

    auto* query = app.add_subcommand("query", "Locate points read as \"x y\" lines");
    query->add_option("--index", index, "Index file")->required();
    query->add_option("--points", points, "Point file")->required();
    query->add_option("--method", method, "trap or landmark")->check(CLI::IsMember({"trap", "landmark"}));

    auto* validate = app.add_subcommand("validate", "Compare an index with brute-force classification");
    validate->add_option("--scene", scene, "Scene file")->required();
    validate->add_option("--samples", samples, "Number of sample points")->check(CLI::NonNegativeNumber);
    validate->add_option("--seed", seed, "Seed for the index and the samples");
    validate->add_option("--method", validate_method, "trap, landmark or both")
        ->check(CLI::IsMember({"trap", "landmark", "both"}));

    auto* render = app.add_subcommand("render", "Write an SVG drawing");
    render->add_option("--scene", scene, "Scene file")->required();
    render->add_option("--out", out, "SVG file to write")->required();
    render->add_option("--layer", layer, "arrangement, subdivision or landmarks")
        ->check(CLI::IsMember({"arrangement", "subdivision", "landmarks"}));
    render->add_option("--seed", seed, "Seed for the index");

    auto* bench = app.add_subcommand("bench", "Size and query cost on random scenes");
    bench->add_option("--type", type, "disks or arcs")->check(CLI::IsMember({"disks", "arcs"}));
    bench->add_option("--sizes", sizes, "Comma-separated scene sizes")->delimiter(',');
    bench->add_option("--queries", queries, "Queries per scene")->check(CLI::NonNegativeNumber);
    bench->add_option("--seed", seed, "Seed for scenes and queries");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kBadInput;
    }

    try {
        const std::uint64_t s = seed ? *seed : default_seed();
        if (*build) return cmd_build(scene, out, s);
        if (*query) return cmd_query(index, points, method);
        if (*validate) return cmd_validate(scene, samples, s, validate_method);
        if (*render) return cmd_render(scene, out, layer, s);
        if (*bench) return cmd_bench(type, sizes, queries, s);
    } catch (const GeometryError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return e.code() == ErrorCode::UnsupportedScene ? kUnsupported : kBadInput;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kBadInput;
    }
    return kOk;
}
