#include "cpack/render.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <stdexcept>

namespace cpack {

std::string to_string(FillMode m) {
    switch (m) {
        case FillMode::none: return "none";
        case FillMode::by_height: return "by-height";
        case FillMode::by_kind: return "by-kind";
    }
    return "?";
}

FillMode fill_mode_from_string(const std::string& s) {
    if (s == "none") return FillMode::none;
    if (s == "by-height") return FillMode::by_height;
    if (s == "by-kind") return FillMode::by_kind;
    throw std::invalid_argument("unknown fill mode: " + s);
}

std::map<std::string, std::string> RenderStyle::default_palette() {
    return {{"base", "#1f3fbf"}, {"dual", "#d02020"}, {"super", "#208040"}, {"h0", "#1f3fbf"},
            {"h1", "#3f7fdf"},   {"h2", "#20a0a0"},   {"h3", "#40a040"},   {"h4", "#c0a020"},
            {"h5", "#e07020"},   {"h6", "#d02020"},   {"h7", "#a02080"}};
}

std::string format_number(double v) {
    if (!std::isfinite(v)) throw std::invalid_argument("cannot format a non-finite coordinate");
    if (v == 0) return "0";
    int e = static_cast<int>(std::floor(std::log10(std::fabs(v))));
    int decimals = std::max(0, 8 - e);
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", decimals, v);
    std::string s = buf;
    if (s.find('.') != std::string::npos) {
        while (s.back() == '0') s.pop_back();
        if (s.back() == '.') s.pop_back();
    }
    if (s == "-0") s = "0";
    return s;
}

namespace {

struct Item {
    Circle circle;
    std::string kind;
    int height;
};

std::string color(const RenderStyle& st, const std::string& key, const std::string& fallback) {
    auto it = st.palette.find(key);
    return it == st.palette.end() ? fallback : it->second;
}

std::string height_color(const RenderStyle& st, int h) {
    auto it = st.palette.find("h" + std::to_string(h));
    if (it != st.palette.end()) return it->second;
    return color(st, "h" + std::to_string(h % 8), "#808080");
}

// segment of the line p.n = offset inside the window, if any
std::optional<std::array<double, 4>> clip_line(const Circle& c, const Window& w) {
    double nx = c.h1.f(), ny = c.h2.f(), off = c.co_curvature.f() / 2;
    double px = off * nx, py = off * ny, dx = -ny, dy = nx;
    double t0 = -1e300, t1 = 1e300;
    auto clip = [&](double p, double d, double lo, double hi) {
        if (std::fabs(d) < 1e-15) return lo <= p && p <= hi;
        double a = (lo - p) / d, b = (hi - p) / d;
        if (a > b) std::swap(a, b);
        t0 = std::max(t0, a);
        t1 = std::min(t1, b);
        return t0 <= t1;
    };
    if (!clip(px, dx, w.xmin.f(), w.xmax.f()) || !clip(py, dy, w.ymin.f(), w.ymax.f())) return std::nullopt;
    return std::array<double, 4>{px + t0 * dx, py + t0 * dy, px + t1 * dx, py + t1 * dy};
}

std::string render(const std::vector<Item>& items, const RenderStyle& st, const Window& w) {
    if (!w.valid()) throw std::invalid_argument("render window is empty");
    if (st.width_px <= 0 || st.height_px <= 0) throw std::invalid_argument("pixel size must be positive");
    double x0 = w.xmin.f(), x1 = w.xmax.f(), y0 = w.ymin.f(), y1 = w.ymax.f();
    std::ostringstream out;
    out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << st.width_px << "\" height=\""
        << st.height_px << "\" viewBox=\"" << format_number(x0) << " " << format_number(-y1) << " "
        << format_number(x1 - x0) << " " << format_number(y1 - y0) << "\">\n";
    out << "<g fill=\"none\" stroke-width=\"" << format_number(st.stroke_width) << "\">\n";
    for (const auto& it : items) {
        const Circle& c = it.circle;
        std::string stroke = color(st, it.kind, "#000000");
        std::string fill;
        if (st.fill == FillMode::by_kind) fill = stroke;
        if (st.fill == FillMode::by_height) fill = height_color(st, it.height);
        std::string fill_attr = fill.empty() ? "" : " fill=\"" + fill + "\" fill-opacity=\"0.35\"";
        if (c.is_line()) {
            auto seg = clip_line(c, w);
            if (!seg) continue;
            out << "<line x1=\"" << format_number((*seg)[0]) << "\" y1=\"" << format_number(-(*seg)[1]) << "\" x2=\""
                << format_number((*seg)[2]) << "\" y2=\"" << format_number(-(*seg)[3]) << "\" stroke=\"" << stroke
                << "\"/>\n";
            continue;
        }
        out << "<circle cx=\"" << format_number(c.center_x_f()) << "\" cy=\"" << format_number(-c.center_y_f())
            << "\" r=\"" << format_number(c.radius_f()) << "\" stroke=\"" << stroke << "\"" << fill_attr << "/>\n";
    }
    out << "</g>\n</svg>\n";
    return out.str();
}

}  // namespace

std::string to_svg(const Packing& p, const RenderStyle& style) {
    Window w = style.clip ? *style.clip : p.limits.window;
    std::vector<Item> items;
    for (const auto& pc : p.circles)
        if (meets(pc.circle, w)) items.push_back({pc.circle, pc.kind, pc.height});
    return render(items, style, w);
}

std::string to_svg(const Configuration& c, const Window& w, RenderStyle style) {
    Window v = style.clip ? *style.clip : w;
    std::vector<Item> items;
    for (const auto& lc : c.all_circles(w))
        if (meets(lc.circle, v)) items.push_back({lc.circle, to_string(lc.kind), 0});
    return render(items, style, v);
}

}  // namespace cpack
