#include "curveloc/render.hpp"

#include <cstdio>

namespace curveloc {

namespace {

constexpr double kWidth = 800;

class Canvas {
public:
    explicit Canvas(const BoundingBox& box) : box_(box) {
        scale_ = kWidth / std::max(box.width(), 1e-300);
        height_ = box.height() * scale_;
    }

    std::string num(double v) const {
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.4f", v);
        std::string s = buf;
        if (s == "-0.0000") s = "0.0000";
        return s;
    }
    double px(double v) const { return (v - box_.min.x) * scale_; }
    double py(double v) const { return (box_.max.y - v) * scale_; }
    std::string x(double v) const { return num(px(v)); }
    std::string y(double v) const { return num(py(v)); }
    std::string len(double v) const { return num(v * scale_); }

    std::string header() const {
        return "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 " + num(kWidth) + " " + num(height_) +
               "\" width=\"" + num(kWidth) + "\" height=\"" + num(height_) + "\">\n";
    }
    std::string line(const Point& a, const Point& b, const char* cls) const {
        return "<line class=\"" + std::string(cls) + "\" x1=\"" + x(a.x) + "\" y1=\"" + y(a.y) + "\" x2=\"" + x(b.x) +
               "\" y2=\"" + y(b.y) + "\"/>\n";
    }
    std::string polyline(const std::vector<Point>& pts, const char* cls) const {
        std::string d;
        for (std::size_t i = 0; i < pts.size(); ++i) d += (i ? " L" : "M") + x(pts[i].x) + " " + y(pts[i].y);
        return "<path class=\"" + std::string(cls) + "\" d=\"" + d + "\"/>\n";
    }

private:
    BoundingBox box_;
    double scale_ = 1, height_ = 0;
};

const char* kStyle =
    "<style>\n"
    ".curve{fill:none;stroke:#1f4e9c;stroke-width:2}\n"
    ".cells{fill:none;stroke:#999999;stroke-width:0.5}\n"
    ".wall{stroke:#999999;stroke-width:0.5}\n"
    ".tangent{stroke:#c0392b;stroke-width:1}\n"
    ".connector{stroke:#27ae60;stroke-width:1}\n"
    ".box{fill:none;stroke:#e67e22;stroke-width:1;stroke-dasharray:4 2}\n"
    ".landmark{fill:#8e44ad}\n"
    "</style>\n";

std::string draw_curves(const Canvas& cv, const std::vector<Curve>& curves) {
    std::string out;
    for (const auto& c : curves) {
        if (const auto* d = std::get_if<DiskCurve>(&c.shape)) {
            out += "<circle class=\"curve\" cx=\"" + cv.x(d->center.x) + "\" cy=\"" + cv.y(d->center.y) + "\" r=\"" +
                   cv.len(d->radius) + "\"/>\n";
        } else if (const auto* s = std::get_if<SegmentCurve>(&c.shape)) {
            out += cv.line(s->a, s->b, "curve");
        } else {
            const auto& p = std::get<ParabolaArc>(c.shape);
            std::vector<Point> pts;
            for (int i = 0; i <= 64; ++i) {
                const double t = p.x_lo + (p.x_hi - p.x_lo) * i / 64.0;
                pts.push_back({t, p.eval(t)});
            }
            out += cv.polyline(pts, "curve");
        }
    }
    return out;
}

// All straight edges of a subdivision as a single path.
std::string draw_edges(const Canvas& cv, const PlanarSubdivision& s, const char* cls) {
    std::string d;
    for (int e = 0; e < s.num_edges(); ++e) {
        if (!s.is_straight(2 * e)) continue;
        const Point a = s.origin_point(2 * e), b = s.dest_point(2 * e);
        d += "M" + cv.x(a.x) + " " + cv.y(a.y) + " L" + cv.x(b.x) + " " + cv.y(b.y) + " ";
    }
    if (d.empty()) return "";
    d.pop_back();
    return "<path class=\"" + std::string(cls) + "\" d=\"" + d + "\"/>\n";
}

}  // namespace

const char* to_string(Layer l) {
    switch (l) {
        case Layer::Arrangement: return "arrangement";
        case Layer::Subdivision: return "subdivision";
        case Layer::Landmarks: return "landmarks";
    }
    return "?";
}

std::string render_svg(const AugmentedIndex& index, Layer layer) {
    const auto& sub = index.sub;
    const Canvas cv(sub.box);
    std::string out = cv.header();
    out += kStyle;
    switch (layer) {
        case Layer::Arrangement:
            out += draw_edges(cv, sub.A, "wall");
            out += draw_curves(cv, sub.curves);
            break;
        case Layer::Subdivision:
            out += draw_edges(cv, sub.C, "cells");
            if (sub.kind == SceneKind::Arcs) {
                for (const auto& p : sub.pieces) {
                    const BoundingBox b = bounding_box(p);
                    out += "<rect class=\"box\" x=\"" + cv.x(b.min.x) + "\" y=\"" + cv.y(b.max.y) + "\" width=\"" +
                           cv.len(b.width()) + "\" height=\"" + cv.len(b.height()) + "\"/>\n";
                }
            } else {
                for (const auto& c : sub.curves) {
                    const auto& d = std::get<DiskCurve>(c.shape);
                    for (const Point dir : {Point{1, 0}, Point{0, 1}, Point{-1, 0}, Point{0, -1}})
                        out += cv.line(d.center, d.center + dir * d.radius, "connector");
                }
            }
            for (const auto& t : sub.tangents) out += cv.line(t.a, t.b, "tangent");
            out += draw_curves(cv, sub.curves);
            break;
        case Layer::Landmarks:
            if (!index.landmarks) throw GeometryError(ErrorCode::InvalidInput, "index has no landmarks");
            out += draw_edges(cv, sub.C, "cells");
            for (const auto& l : index.landmarks->landmarks) {
                out += "<rect class=\"landmark\" x=\"" + cv.num(cv.px(l.p.x) - 1) + "\" y=\"" + cv.num(cv.py(l.p.y) - 1) +
                       "\" width=\"2\" height=\"2\"/>\n";
            }
            break;
    }
    out += "</svg>\n";
    return out;
}

}  // namespace curveloc
