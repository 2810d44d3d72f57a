#include "curveloc/scene.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <random>
#include <sstream>

namespace curveloc {

namespace {

std::vector<std::string_view> split_words(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t i = 0;
    while (i < line.size()) {
        while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
        std::size_t j = i;
        while (j < line.size() && line[j] != ' ' && line[j] != '\t' && line[j] != '\r') ++j;
        if (j > i) out.push_back(line.substr(i, j - i));
        i = j;
    }
    return out;
}

[[noreturn]] void bad_line(int line, const std::string& why) {
    throw GeometryError(ErrorCode::InvalidInput, "line " + std::to_string(line) + ": " + why);
}

double number(std::string_view w, int line) {
    double v = 0;
    const auto [end, ec] = std::from_chars(w.data(), w.data() + w.size(), v);
    if (ec != std::errc() || end != w.data() + w.size()) bad_line(line, "not a number: " + std::string(w));
    if (!std::isfinite(v)) bad_line(line, "non-finite value");
    return v;
}

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

bool disjoint_from(const std::vector<Curve>& scene, const Curve& c, double eps) {
    const auto pc = monotone_decompose(c);
    for (const auto& other : scene) {
        for (const auto& a : monotone_decompose(other)) {
            for (const auto& b : pc) {
                if (!bounding_box(a).intersects(bounding_box(b), 10 * eps)) continue;
                if (!intersect_pieces(a, b, eps).empty()) return false;
                // Near misses make separating tangents degenerate.
                for (double t : {b.t_begin(), b.t_end()})
                    if (a.distance(b.point_at(t)) < 1e-3) return false;
                for (double t : {a.t_begin(), a.t_end()})
                    if (b.distance(a.point_at(t)) < 1e-3) return false;
            }
        }
    }
    return true;
}

}  // namespace

Scene parse_scene(std::string_view text) {
    Scene s;
    std::optional<SceneKind> declared;
    bool saw_disk = false, saw_arc = false;
    int line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        std::size_t nl = text.find('\n', pos);
        if (nl == std::string_view::npos) nl = text.size();
        std::string_view line = text.substr(pos, nl - pos);
        pos = nl + 1;
        ++line_no;
        if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
        const auto w = split_words(line);
        if (w.empty()) continue;
        auto want = [&](std::size_t n) {
            if (w.size() != n + 1) bad_line(line_no, std::string(w[0]) + " takes " + std::to_string(n) + " values");
        };
        const int id = static_cast<int>(s.curves.size());
        if (w[0] == "type") {
            want(1);
            if (w[1] == "disks") {
                declared = SceneKind::Disks;
            } else if (w[1] == "arcs") {
                declared = SceneKind::Arcs;
            } else {
                bad_line(line_no, "unknown scene type " + std::string(w[1]));
            }
        } else if (w[0] == "epsilon") {
            want(1);
            const double e = number(w[1], line_no);
            if (!(e > 0)) bad_line(line_no, "epsilon must be positive");
            s.epsilon = e;
        } else if (w[0] == "disk") {
            want(3);
            s.curves.push_back(make_disk(id, {number(w[1], line_no), number(w[2], line_no)}, number(w[3], line_no)));
            saw_disk = true;
        } else if (w[0] == "arc") {
            want(5);
            double v[5];
            for (int k = 0; k < 5; ++k) v[k] = number(w[k + 1], line_no);
            s.curves.push_back(make_parabola(id, v[0], v[1], v[2], v[3], v[4]));
            saw_arc = true;
        } else if (w[0] == "segment") {
            want(4);
            double v[4];
            for (int k = 0; k < 4; ++k) v[k] = number(w[k + 1], line_no);
            s.curves.push_back(make_segment(id, {v[0], v[1]}, {v[2], v[3]}));
            saw_arc = true;
        } else {
            bad_line(line_no, "unknown record " + std::string(w[0]));
        }
        if (!s.curves.empty() && static_cast<int>(s.curves.size()) > id) {
            try {
                s.curves.back().validate();
            } catch (const GeometryError& e) {
                bad_line(line_no, e.what());
            }
        }
    }
    if (saw_disk && saw_arc) throw GeometryError(ErrorCode::UnsupportedScene, "disks mixed with arcs or segments");
    const SceneKind found = saw_disk ? SceneKind::Disks : SceneKind::Arcs;
    if (declared && (saw_disk || saw_arc) && *declared != found) {
        throw GeometryError(ErrorCode::UnsupportedScene, std::string("scene declared as ") + to_string(*declared) +
                                                             " contains " + to_string(found));
    }
    s.kind = declared ? *declared : found;
    if (!declared && !saw_disk && !saw_arc) s.kind = SceneKind::Disks;
    return s;
}

Scene load_scene(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw GeometryError(ErrorCode::InvalidInput, "cannot read " + path);
    std::ostringstream ss;
    ss << f.rdbuf();
    return parse_scene(ss.str());
}

std::string format_scene(const Scene& scene) {
    std::string out = std::string("type ") + to_string(scene.kind) + "\n";
    if (scene.epsilon) out += "epsilon " + fmt(*scene.epsilon) + "\n";
    for (const auto& c : scene.curves) {
        if (const auto* d = std::get_if<DiskCurve>(&c.shape)) {
            out += "disk " + fmt(d->center.x) + " " + fmt(d->center.y) + " " + fmt(d->radius) + "\n";
        } else if (const auto* s = std::get_if<SegmentCurve>(&c.shape)) {
            out += "segment " + fmt(s->a.x) + " " + fmt(s->a.y) + " " + fmt(s->b.x) + " " + fmt(s->b.y) + "\n";
        } else {
            const auto& p = std::get<ParabolaArc>(c.shape);
            out += "arc " + fmt(p.a) + " " + fmt(p.b) + " " + fmt(p.c) + " " + fmt(p.x_lo) + " " + fmt(p.x_hi) + "\n";
        }
    }
    return out;
}

std::vector<Curve> random_disks(int n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> c(0, 10), r(0.3, 1.5);
    std::vector<Curve> out;
    for (int i = 0; i < n; ++i) {
        const double x = c(rng), y = c(rng);
        out.push_back(make_disk(i, {x, y}, r(rng)));
    }
    return out;
}

std::vector<Curve> random_disjoint_disks(int n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    const double side = 4.0 * std::sqrt(static_cast<double>(std::max(n, 1)));
    std::uniform_real_distribution<double> c(0, side), r(0.3, 1.0);
    std::vector<Curve> out;
    while (static_cast<int>(out.size()) < n) {
        const double x = c(rng), y = c(rng);
        const Point p{x, y};
        const double rad = r(rng);
        bool ok = true;
        for (const auto& o : out) {
            const auto& d = std::get<DiskCurve>(o.shape);
            if (dist(d.center, p) < d.radius + rad + 0.1) ok = false;
        }
        if (ok) out.push_back(make_disk(static_cast<int>(out.size()), p, rad));
    }
    return out;
}

std::vector<Curve> random_arcs(int n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(0, 10), curv(-0.6, 0.6), width(1, 6), unit(0, 1);
    std::vector<Curve> out;
    for (int tries = 0; static_cast<int>(out.size()) < n; ++tries) {
        if (tries > 100000) throw GeometryError(ErrorCode::InvalidInput, "cannot place disjoint arcs");
        const int id = static_cast<int>(out.size());
        Curve c;
        if (unit(rng) < 0.3) {
            const double x1 = u(rng), y1 = u(rng), x2 = u(rng), y2 = u(rng);
            c = make_segment(id, {x1, y1}, {x2, y2});
            if (dist({x1, y1}, {x2, y2}) < 0.5) continue;
        } else {
            // Vertex form a (x - h)^2 + k over a window around h.
            const double a = curv(rng), h = u(rng), k = u(rng), w = width(rng), shift = unit(rng) - 0.5;
            if (std::abs(a) < 0.05) continue;
            const double lo = std::max(0.0, h - w / 2 + shift), hi = std::min(10.0, h + w / 2 + shift);
            if (hi - lo < 0.5) continue;
            c = make_parabola(id, a, -2 * a * h, a * h * h + k, lo, hi);
        }
        if (disjoint_from(out, c, 1e-8)) out.push_back(c);
    }
    return out;
}

}  // namespace curveloc
