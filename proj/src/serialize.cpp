#include "curveloc/serialize.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <sstream>

namespace curveloc {

namespace {

class Writer {
public:
    std::string out;

    void u8(std::uint8_t v) { out.push_back(static_cast<char>(v)); }
    void u64(std::uint64_t v) {
        for (int i = 0; i < 8; ++i) u8(static_cast<std::uint8_t>(v >> (8 * i)));
    }
    void u16(std::uint16_t v) {
        u8(static_cast<std::uint8_t>(v));
        u8(static_cast<std::uint8_t>(v >> 8));
    }
    void i32(int v) {
        const auto u = static_cast<std::uint32_t>(v);
        for (int i = 0; i < 4; ++i) u8(static_cast<std::uint8_t>(u >> (8 * i)));
    }
    void i64(long long v) { u64(static_cast<std::uint64_t>(v)); }
    void f64(double v) { u64(std::bit_cast<std::uint64_t>(v)); }
    void count(std::size_t n) { u64(n); }
    void point(const Point& p) {
        f64(p.x);
        f64(p.y);
    }
    void box(const BoundingBox& b) {
        point(b.min);
        point(b.max);
    }
    template <class T, class F>
    void list(const std::vector<T>& v, F&& each) {
        count(v.size());
        for (const auto& x : v) each(x);
    }
    void ints(const std::vector<int>& v) {
        list(v, [&](int x) { i32(x); });
    }

    // Sections are tag + byte length + payload.
    void section(const char* tag, const std::string& payload) {
        out.append(tag, 4);
        u64(payload.size());
        out += payload;
    }
};

class Reader {
public:
    explicit Reader(std::string_view data) : data_(data) {}

    bool done() const { return pos_ == data_.size(); }
    std::uint8_t u8() {
        need(1);
        return static_cast<std::uint8_t>(data_[pos_++]);
    }
    std::uint16_t u16() {
        const std::uint16_t lo = u8();
        return static_cast<std::uint16_t>(lo | (u8() << 8));
    }
    std::uint64_t u64() {
        std::uint64_t v = 0;
        for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(u8()) << (8 * i);
        return v;
    }
    int i32() {
        std::uint32_t v = 0;
        for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(u8()) << (8 * i);
        return static_cast<int>(v);
    }
    long long i64() { return static_cast<long long>(u64()); }
    double f64() { return std::bit_cast<double>(u64()); }
    bool flag() {
        const auto v = u8();
        if (v > 1) corrupt("bad boolean");
        return v == 1;
    }
    // Element count, bounded by the bytes left so garbage cannot allocate.
    std::size_t count(std::size_t min_bytes = 1) {
        const std::uint64_t n = u64();
        if (n > (data_.size() - pos_) / min_bytes) corrupt("count exceeds data");
        return static_cast<std::size_t>(n);
    }
    Point point() {
        const double x = f64();
        return {x, f64()};
    }
    BoundingBox box() {
        const Point a = point();
        return {a, point()};
    }
    template <class T, class F>
    std::vector<T> list(std::size_t min_bytes, F&& each) {
        std::vector<T> v(count(min_bytes));
        for (auto& x : v) x = each();
        return v;
    }
    std::vector<int> ints() {
        return list<int>(4, [&] { return i32(); });
    }
    int index(int n) {
        const int v = i32();
        if (v < -1 || v >= n) corrupt("index out of range");
        return v;
    }

    Reader section(const char* tag) {
        need(4);
        if (data_.compare(pos_, 4, tag, 4) != 0) corrupt(std::string("expected section ") + tag);
        pos_ += 4;
        const std::uint64_t len = u64();
        need(len);
        Reader r(data_.substr(pos_, len));
        pos_ += len;
        return r;
    }
    void end() {
        if (!done()) corrupt("trailing bytes in section");
    }

    [[noreturn]] static void corrupt(const std::string& why) { throw GeometryError(ErrorCode::CorruptData, why); }

private:
    std::string_view data_;
    std::size_t pos_ = 0;

    void need(std::uint64_t n) {
        if (n > data_.size() - pos_) corrupt("truncated stream");
    }
};

void write_curve(Writer& w, const Curve& c) {
    w.i32(c.id);
    w.u8(static_cast<std::uint8_t>(c.shape.index()));
    if (const auto* s = std::get_if<SegmentCurve>(&c.shape)) {
        w.point(s->a);
        w.point(s->b);
    } else if (const auto* d = std::get_if<DiskCurve>(&c.shape)) {
        w.point(d->center);
        w.f64(d->radius);
    } else {
        const auto& p = std::get<ParabolaArc>(c.shape);
        for (double v : {p.a, p.b, p.c, p.x_lo, p.x_hi}) w.f64(v);
    }
}

Curve read_curve(Reader& r) {
    Curve c;
    c.id = r.i32();
    switch (r.u8()) {
        case 0: {
            SegmentCurve s;
            s.a = r.point();
            s.b = r.point();
            c.shape = s;
            break;
        }
        case 1: {
            DiskCurve d;
            d.center = r.point();
            d.radius = r.f64();
            c.shape = d;
            break;
        }
        case 2: {
            ParabolaArc p;
            p.a = r.f64();
            p.b = r.f64();
            p.c = r.f64();
            p.x_lo = r.f64();
            p.x_hi = r.f64();
            c.shape = p;
            break;
        }
        default: Reader::corrupt("unknown curve type");
    }
    return c;
}

void write_piece(Writer& w, const MonotonePiece& p) {
    w.i32(p.parent);
    w.i32(p.piece_index);
    w.u8(static_cast<std::uint8_t>(p.convexity));
    w.u8(static_cast<std::uint8_t>(p.geometry.index()));
    if (const auto* l = std::get_if<LinePiece>(&p.geometry)) {
        w.point(l->a);
        w.point(l->b);
    } else if (const auto* g = std::get_if<GraphArc>(&p.geometry)) {
        for (double v : {g->a, g->b, g->c, g->x_lo, g->x_hi}) w.f64(v);
    } else {
        const auto& c = std::get<CircleArc>(p.geometry);
        w.point(c.center);
        w.f64(c.radius);
        w.f64(c.t0);
        w.f64(c.t1);
        w.i32(c.quadrant);
    }
}

MonotonePiece read_piece(Reader& r) {
    MonotonePiece p;
    p.parent = r.i32();
    p.piece_index = r.i32();
    const auto cv = r.u8();
    if (cv > 2) Reader::corrupt("bad convexity");
    p.convexity = static_cast<Convexity>(cv);
    switch (r.u8()) {
        case 0: {
            LinePiece l;
            l.a = r.point();
            l.b = r.point();
            p.geometry = l;
            break;
        }
        case 1: {
            GraphArc g;
            g.a = r.f64();
            g.b = r.f64();
            g.c = r.f64();
            g.x_lo = r.f64();
            g.x_hi = r.f64();
            p.geometry = g;
            break;
        }
        case 2: {
            CircleArc c;
            c.center = r.point();
            c.radius = r.f64();
            c.t0 = r.f64();
            c.t1 = r.f64();
            c.quadrant = r.i32();
            p.geometry = c;
            break;
        }
        default: Reader::corrupt("unknown piece type");
    }
    return p;
}

std::string write_dcel(const PlanarSubdivision& s) {
    Writer w;
    w.list(s.vertices, [&](const auto& v) {
        w.point(v.p);
        w.i32(v.half_edge);
    });
    w.list(s.half_edges, [&](const auto& h) {
        for (int x : {h.origin, h.twin, h.next, h.prev, h.face}) w.i32(x);
    });
    w.list(s.faces, [&](const auto& f) {
        w.i32(f.outer);
        w.ints(f.inner);
    });
    w.list(s.pieces, [&](const auto& p) { write_piece(w, p); });
    w.list(s.arcs, [&](const auto& a) {
        w.i32(a.piece);
        w.f64(a.t_from);
        w.f64(a.t_to);
    });
    w.i32(s.unbounded_face);
    w.f64(s.epsilon);
    return w.out;
}

PlanarSubdivision read_dcel(Reader r) {
    PlanarSubdivision s;
    s.vertices = r.list<PlanarSubdivision::Vertex>(20, [&] {
        PlanarSubdivision::Vertex v;
        v.p = r.point();
        v.half_edge = r.i32();
        return v;
    });
    s.half_edges = r.list<PlanarSubdivision::HalfEdge>(20, [&] {
        PlanarSubdivision::HalfEdge h;
        h.origin = r.i32();
        h.twin = r.i32();
        h.next = r.i32();
        h.prev = r.i32();
        h.face = r.i32();
        return h;
    });
    s.faces = r.list<PlanarSubdivision::Face>(12, [&] {
        PlanarSubdivision::Face f;
        f.outer = r.i32();
        f.inner = r.ints();
        return f;
    });
    s.pieces = r.list<MonotonePiece>(10, [&] { return read_piece(r); });
    s.arcs = r.list<EdgeArc>(20, [&] {
        EdgeArc a;
        a.piece = r.i32();
        a.t_from = r.f64();
        a.t_to = r.f64();
        return a;
    });
    s.unbounded_face = r.i32();
    s.epsilon = r.f64();
    r.end();

    // Cross-references must stay in range or later traversals would fault.
    const int nv = static_cast<int>(s.vertices.size());
    const int nh = static_cast<int>(s.half_edges.size());
    const int nf = static_cast<int>(s.faces.size());
    if (nh % 2 != 0) Reader::corrupt("odd half-edge count");
    auto in = [](int v, int n) { return v >= -1 && v < n; };
    for (const auto& v : s.vertices)
        if (!in(v.half_edge, nh)) Reader::corrupt("vertex half-edge out of range");
    for (const auto& h : s.half_edges) {
        if (!in(h.origin, nv) || !in(h.twin, nh) || !in(h.next, nh) || !in(h.prev, nh) || !in(h.face, nf))
            Reader::corrupt("half-edge reference out of range");
    }
    for (const auto& f : s.faces) {
        if (!in(f.outer, nh)) Reader::corrupt("face reference out of range");
        for (int h : f.inner)
            if (!in(h, nh)) Reader::corrupt("face reference out of range");
    }
    for (const auto& a : s.arcs)
        if (!in(a.piece, static_cast<int>(s.pieces.size()))) Reader::corrupt("arc piece out of range");
    if (nf > 0 && !in(s.unbounded_face, nf)) Reader::corrupt("unbounded face out of range");
    return s;
}

std::string write_scene(const AugmentedSubdivision& a) {
    Writer w;
    w.u8(static_cast<std::uint8_t>(a.kind));
    w.f64(a.epsilon);
    w.box(a.box);
    w.list(a.curves, [&](const Curve& c) { write_curve(w, c); });
    w.list(a.pieces, [&](const MonotonePiece& p) { write_piece(w, p); });
    w.list(a.tangents, [&](const Segment& s) {
        w.point(s.a);
        w.point(s.b);
    });
    return w.out;
}

std::string write_lists(const AugmentedSubdivision& a) {
    Writer w;
    w.list(a.face_signs, [&](const SignVector& v) {
        w.list(v, [&](Sign s) { w.u8(static_cast<std::uint8_t>(s)); });
    });
    w.ints(a.chain_start);
    w.list(a.chain, [&](const ListEntry& e) {
        w.i32(e.curve);
        w.i32(e.piece);
        w.u8(e.positive ? 1 : 0);
    });
    w.ints(a.gaps);
    w.list(a.reversed, [&](std::uint8_t r) { w.u8(r); });
    const auto& st = a.stats;
    w.i64(st.size);
    w.i32(st.max_cell_complexity);
    w.i32(st.cells);
    w.i64(st.list_entries);
    w.i32(st.bisections);
    w.i32(st.unresolved_cells);
    return w.out;
}

std::string write_map(const TrapezoidalMap& m) {
    Writer w;
    w.u64(m.seed);
    w.box(m.box);
    w.i32(m.trapezoids);
    w.list(m.points, [&](const Point& p) { w.point(p); });
    w.list(m.segments, [&](const std::array<int, 2>& s) {
        w.i32(s[0]);
        w.i32(s[1]);
    });
    w.list(m.nodes, [&](const TrapezoidalMap::Node& n) {
        w.u8(static_cast<std::uint8_t>(n.kind));
        w.i32(n.value);
        w.i32(n.left);
        w.i32(n.right);
    });
    return w.out;
}

TrapezoidalMap read_map(Reader r, int cells) {
    TrapezoidalMap m;
    m.seed = r.u64();
    m.box = r.box();
    m.trapezoids = r.i32();
    m.points = r.list<Point>(16, [&] { return r.point(); });
    const int np = static_cast<int>(m.points.size());
    m.segments = r.list<std::array<int, 2>>(8, [&] {
        const int a = r.index(np);
        return std::array<int, 2>{a, r.index(np)};
    });
    m.nodes = r.list<TrapezoidalMap::Node>(13, [&] {
        TrapezoidalMap::Node n;
        const auto k = r.u8();
        if (k > 2) Reader::corrupt("bad node kind");
        n.kind = static_cast<TrapezoidalMap::NodeKind>(k);
        n.value = r.i32();
        n.left = r.i32();
        n.right = r.i32();
        return n;
    });
    r.end();
    const int nn = static_cast<int>(m.nodes.size());
    if (nn == 0) Reader::corrupt("empty search structure");
    for (int i = 0; i < nn; ++i) {
        const auto& n = m.nodes[i];
        switch (n.kind) {
            case TrapezoidalMap::NodeKind::Leaf:
                if (n.value < 0 || n.value >= cells) Reader::corrupt("leaf cell out of range");
                break;
            case TrapezoidalMap::NodeKind::X:
            case TrapezoidalMap::NodeKind::Y: {
                const int lim = n.kind == TrapezoidalMap::NodeKind::X ? np : static_cast<int>(m.segments.size());
                if (n.value < 0 || n.value >= lim) Reader::corrupt("node operand out of range");
                if (n.left < 0 || n.left >= nn || n.right < 0 || n.right >= nn)
                    Reader::corrupt("node child out of range");
                break;
            }
        }
    }
    // A cycle would make queries loop forever.
    std::vector<std::uint8_t> state(nn, 0);  // 0 new, 1 on stack, 2 done
    std::vector<std::pair<int, int>> stack{{0, 0}};
    state[0] = 1;
    while (!stack.empty()) {
        auto& [v, step] = stack.back();
        const auto& n = m.nodes[v];
        if (n.kind == TrapezoidalMap::NodeKind::Leaf || step == 2) {
            state[v] = 2;
            stack.pop_back();
            continue;
        }
        const int c = step++ == 0 ? n.left : n.right;
        if (state[c] == 1) Reader::corrupt("search structure has a cycle");
        if (state[c] == 0) {
            state[c] = 1;
            stack.push_back({c, 0});
        }
    }
    return m;
}

std::string write_landmarks(const LandmarkIndex& l) {
    Writer w;
    w.f64(l.offset_fraction);
    w.i32(l.skipped_edges);
    w.list(l.landmarks, [&](const Landmark& m) {
        w.point(m.p);
        w.i32(m.face);
        w.i32(m.edge);
    });
    w.list(l.pair_offset, [&](double d) { w.f64(d); });
    w.ints(l.kd_order);
    return w.out;
}

LandmarkIndex read_landmarks(Reader r, int cells) {
    LandmarkIndex l;
    l.offset_fraction = r.f64();
    l.skipped_edges = r.i32();
    l.landmarks = r.list<Landmark>(24, [&] {
        Landmark m;
        m.p = r.point();
        m.face = r.index(cells);
        m.edge = r.i32();
        return m;
    });
    l.pair_offset = r.list<double>(8, [&] { return r.f64(); });
    l.kd_order = r.ints();
    r.end();
    if (l.kd_order.size() != l.landmarks.size()) Reader::corrupt("kd order size mismatch");
    for (int id : l.kd_order)
        if (id < 0 || id >= l.size()) Reader::corrupt("kd order out of range");
    return l;
}

}  // namespace

std::string serialize(const AugmentedIndex& index) {
    Writer w;
    w.out.append("CVPL", 4);
    w.u16(kFormatVersion);
    w.section("SCEN", write_scene(index.sub));
    w.section("CSUB", write_dcel(index.sub.C));
    w.section("ASUB", write_dcel(index.sub.A));
    w.section("LIST", write_lists(index.sub));
    w.section("TMAP", write_map(index.map));
    w.u8(index.landmarks ? 1 : 0);
    if (index.landmarks) w.section("LMRK", write_landmarks(*index.landmarks));
    return w.out;
}

AugmentedIndex deserialize(std::string_view bytes) {
    if (bytes.size() < 6 || bytes.substr(0, 4) != "CVPL") Reader::corrupt("missing CVPL magic");
    Reader r(bytes.substr(4));
    const std::uint16_t version = r.u16();
    if (version != kFormatVersion) {
        throw GeometryError(ErrorCode::VersionMismatch, "index format version " + std::to_string(version) +
                                                            ", expected " + std::to_string(kFormatVersion));
    }
    AugmentedIndex idx;
    auto& a = idx.sub;
    {
        Reader s = r.section("SCEN");
        const auto kind = s.u8();
        if (kind > 1) Reader::corrupt("bad scene kind");
        a.kind = static_cast<SceneKind>(kind);
        a.epsilon = s.f64();
        a.box = s.box();
        a.curves = s.list<Curve>(5, [&] { return read_curve(s); });
        a.pieces = s.list<MonotonePiece>(10, [&] { return read_piece(s); });
        a.tangents = s.list<Segment>(32, [&] {
            const Point p = s.point();
            return Segment{p, s.point()};
        });
        s.end();
    }
    a.C = read_dcel(r.section("CSUB"));
    a.A = read_dcel(r.section("ASUB"));
    const int ncell = static_cast<int>(a.C.faces.size());
    const int naface = static_cast<int>(a.A.faces.size());
    {
        Reader s = r.section("LIST");
        a.face_signs = s.list<SignVector>(8, [&] {
            return s.list<Sign>(1, [&] {
                const auto v = s.u8();
                if (v > static_cast<std::uint8_t>(Sign::On)) Reader::corrupt("bad sign");
                return static_cast<Sign>(v);
            });
        });
        a.chain_start = s.ints();
        a.chain = s.list<ListEntry>(9, [&] {
            ListEntry e;
            e.curve = s.index(static_cast<int>(a.curves.size()));
            e.piece = s.i32();
            e.positive = s.flag();
            return e;
        });
        a.gaps = s.ints();
        a.reversed = s.list<std::uint8_t>(1, [&] { return s.u8(); });
        a.stats.size = s.i64();
        a.stats.max_cell_complexity = s.i32();
        a.stats.cells = s.i32();
        a.stats.list_entries = s.i64();
        a.stats.bisections = s.i32();
        a.stats.unresolved_cells = s.i32();
        s.end();
    }
    if (static_cast<int>(a.face_signs.size()) != naface) Reader::corrupt("face label count mismatch");
    if (static_cast<int>(a.chain_start.size()) != ncell + 1 || a.chain_start.front() != 0 ||
        a.chain_start.back() != static_cast<int>(a.chain.size()) ||
        a.gaps.size() != a.chain.size() + static_cast<std::size_t>(ncell))
        Reader::corrupt("list tables inconsistent");
    for (int c = 0; c < ncell; ++c)
        if (a.chain_start[c] > a.chain_start[c + 1]) Reader::corrupt("list tables inconsistent");
    for (int g : a.gaps)
        if (g < 0 || g >= naface) Reader::corrupt("gap face out of range");
    if (!a.reversed.empty() && a.reversed.size() != a.C.half_edges.size()) Reader::corrupt("orientation table size");

    idx.map = read_map(r.section("TMAP"), ncell);
    if (r.flag()) idx.landmarks = read_landmarks(r.section("LMRK"), ncell);
    if (!r.done()) Reader::corrupt("trailing bytes");
    return idx;
}

void save_index(const AugmentedIndex& index, const std::string& path) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw GeometryError(ErrorCode::InvalidInput, "cannot write " + path);
    const std::string bytes = serialize(index);
    f.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!f) throw GeometryError(ErrorCode::InvalidInput, "cannot write " + path);
}

AugmentedIndex load_index(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw GeometryError(ErrorCode::InvalidInput, "cannot read " + path);
    std::ostringstream ss;
    ss << f.rdbuf();
    return deserialize(ss.str());
}

}  // namespace curveloc
