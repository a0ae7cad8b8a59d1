#include "cpack/config.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace cpack {

std::string Window::str() const {
    return "[" + xmin.str() + ", " + xmax.str() + "] x [" + ymin.str() + ", " + ymax.str() + "]";
}

namespace {

Scalar clamp(const Scalar& v, const Scalar& lo, const Scalar& hi) {
    if (v < lo) return lo;
    if (v > hi) return hi;
    return v;
}

// float screen for meets(): +1 certainly meets, -1 certainly not, 0 unsure
int meets_float(const Circle& c, const Window& w) {
    double b = c.curvature.f();
    if (b == 0.0) return 0;
    double cx = c.h1.f() / b, cy = c.h2.f() / b, r = 1.0 / std::fabs(b);
    double px = std::clamp(cx, w.xmin.f(), w.xmax.f());
    double py = std::clamp(cy, w.ymin.f(), w.ymax.f());
    double dist = std::hypot(cx - px, cy - py);
    // distance from the center to the farthest corner
    double fx = std::max(std::fabs(cx - w.xmin.f()), std::fabs(cx - w.xmax.f()));
    double fy = std::max(std::fabs(cy - w.ymin.f()), std::fabs(cy - w.ymax.f()));
    double far = std::hypot(fx, fy);
    double tol = 1e-7 * (1.0 + r + std::fabs(cx) + std::fabs(cy));
    if (dist > r + tol) return -1;
    if (far < r - tol) return -1;  // the rectangle sits strictly inside the disk
    if (dist < r - tol && far > r + tol) return 1;
    return 0;
}

}  // namespace

bool meets(const Circle& c, const Window& w) {
    int quick = meets_float(c, w);
    if (quick != 0) return quick > 0;
    if (c.is_line()) {
        int pos = 0, neg = 0;
        for (const Scalar& x : {w.xmin, w.xmax})
            for (const Scalar& y : {w.ymin, w.ymax}) {
                int s = (c.h1 * x + c.h2 * y - c.co_curvature / Scalar(2)).sign();
                if (s >= 0) ++pos;
                if (s <= 0) ++neg;
            }
        return pos > 0 && neg > 0;
    }
    Point ctr = c.center();
    Scalar r = c.radius();
    Scalar dx = ctr.x - clamp(ctr.x, w.xmin, w.xmax);
    Scalar dy = ctr.y - clamp(ctr.y, w.ymin, w.ymax);
    if (dx * dx + dy * dy > r * r) return false;
    // the circle curve misses the rectangle when the rectangle is strictly inside the disk
    Scalar fx = std::max((ctr.x - w.xmin).abs(), (ctr.x - w.xmax).abs());
    Scalar fy = std::max((ctr.y - w.ymin).abs(), (ctr.y - w.ymax).abs());
    return !(fx * fx + fy * fy < r * r);
}

bool inside_window(const Circle& c, const Window& w) {
    if (c.is_line()) return false;
    Point ctr = c.center();
    Scalar r = c.radius();
    return w.xmin <= ctr.x - r && ctr.x + r <= w.xmax && w.ymin <= ctr.y - r && ctr.y + r <= w.ymax;
}

std::string to_string(CircleKind k) { return k == CircleKind::base ? "base" : "dual"; }

Isometry SymmetryGenerator::isometry() const {
    if (kind == "translation") return Isometry::translation(vec);
    if (kind == "rotation") return Isometry::rotation(point, order);
    if (kind == "mirror") return Isometry::mirror(point, vec);
    if (kind == "glide") return Isometry::glide(point, vec, shift);
    throw std::invalid_argument("unknown symmetry kind: " + kind);
}

bool Configuration::exact() const {
    for (const auto* list : {&base, &dual})
        for (const Circle& c : *list)
            if (!c.exact()) return false;
    return true;
}

std::string make_circle_id(CircleKind k, size_t motif_index, const std::optional<std::pair<Int, Int>>& offset) {
    std::string id = (k == CircleKind::base ? "b" : "d") + std::to_string(motif_index);
    if (offset) id += "@" + offset->first.str() + "," + offset->second.str();
    return id;
}

std::pair<Scalar, Scalar> lattice_coords(const std::array<Point, 2>& L, const Point& p) {
    Scalar det = L[0].x * L[1].y - L[0].y * L[1].x;
    Scalar s = (p.x * L[1].y - p.y * L[1].x) / det;
    Scalar t = (L[0].x * p.y - L[0].y * p.x) / det;
    return {s, t};
}

namespace {

Circle translate(const Circle& c, const std::array<Point, 2>& L, const Int& i, const Int& j) {
    Scalar si{QuadExt(i)}, sj{QuadExt(j)};
    Point t{si * L[0].x + sj * L[1].x, si * L[0].y + sj * L[1].y};
    return apply_isometry(Isometry::translation(t), c);
}

}  // namespace

std::vector<LabeledCircle> Configuration::circles(CircleKind k, const Window& w) const {
    std::vector<LabeledCircle> out;
    const auto& m = motif(k);
    if (!lattice) {
        for (size_t i = 0; i < m.size(); ++i)
            if (meets(m[i], w)) out.push_back({make_circle_id(k, i, std::nullopt), k, m[i]});
        return out;
    }
    const auto& L = *lattice;
    double a = L[0].x.f(), b = L[1].x.f(), c = L[0].y.f(), d = L[1].y.f();
    double det = a * d - b * c;
    for (size_t idx = 0; idx < m.size(); ++idx) {
        const Circle& mc = m[idx];
        if (mc.is_line()) throw std::logic_error("periodic configurations cannot hold lines");
        double cx = mc.center_x_f(), cy = mc.center_y_f(), r = mc.radius_f();
        double smin = INFINITY, smax = -INFINITY, tmin = INFINITY, tmax = -INFINITY;
        for (double x : {w.xmin.f() - r - cx, w.xmax.f() + r - cx})
            for (double y : {w.ymin.f() - r - cy, w.ymax.f() + r - cy}) {
                double s = (x * d - y * b) / det, t = (a * y - c * x) / det;
                smin = std::min(smin, s);
                smax = std::max(smax, s);
                tmin = std::min(tmin, t);
                tmax = std::max(tmax, t);
            }
        for (long long i = static_cast<long long>(std::floor(smin)) - 1; i <= static_cast<long long>(std::ceil(smax)) + 1; ++i)
            for (long long j = static_cast<long long>(std::floor(tmin)) - 1; j <= static_cast<long long>(std::ceil(tmax)) + 1; ++j) {
                // cheap float screen before the exact translate
                double x = cx + i * a + j * b, y = cy + i * c + j * d;
                double px = std::clamp(x, w.xmin.f(), w.xmax.f()), py = std::clamp(y, w.ymin.f(), w.ymax.f());
                if (std::hypot(x - px, y - py) > r + 1e-6 * (1 + r)) continue;
                Circle t = translate(mc, L, Int(i), Int(j));
                if (meets(t, w)) out.push_back({make_circle_id(k, idx, std::make_pair(Int(i), Int(j))), k, t});
            }
    }
    return out;
}

std::vector<LabeledCircle> Configuration::all_circles(const Window& w) const {
    auto out = circles(CircleKind::base, w);
    auto d = circles(CircleKind::dual, w);
    out.insert(out.end(), d.begin(), d.end());
    return out;
}

std::optional<std::string> Configuration::locate(const Circle& c, CircleKind k) const {
    const auto& m = motif(k);
    if (!lattice) {
        for (size_t i = 0; i < m.size(); ++i)
            if (m[i].same(c)) return make_circle_id(k, i, std::nullopt);
        return std::nullopt;
    }
    if (c.is_line()) return std::nullopt;
    Point ctr = c.center();
    for (size_t idx = 0; idx < m.size(); ++idx) {
        const Circle& mc = m[idx];
        if (mc.curvature != c.curvature) continue;
        Point mctr = mc.center();
        auto [s, t] = lattice_coords(*lattice, {ctr.x - mctr.x, ctr.y - mctr.y});
        Int i, j;
        if (!integer_value(s, i) || !integer_value(t, j)) continue;
        Circle cand = translate(mc, *lattice, i, j);
        if (cand.same(c)) return make_circle_id(k, idx, std::make_pair(i, j));
    }
    return std::nullopt;
}

CircleKind Configuration::kind_of_id(const std::string& id) const {
    if (!id.empty() && id[0] == 'b') return CircleKind::base;
    if (!id.empty() && id[0] == 'd') return CircleKind::dual;
    throw std::invalid_argument("unknown circle id: " + id);
}

Circle Configuration::circle_by_id(const std::string& id) const {
    CircleKind k = kind_of_id(id);
    size_t at = id.find('@');
    size_t idx;
    try {
        idx = std::stoul(id.substr(1, at == std::string::npos ? std::string::npos : at - 1));
    } catch (const std::exception&) {
        throw std::invalid_argument("unknown circle id: " + id);
    }
    const auto& m = motif(k);
    if (idx >= m.size()) throw std::invalid_argument("unknown circle id: " + id);
    if (at == std::string::npos) {
        if (lattice) throw std::invalid_argument("periodic circle id needs a lattice offset: " + id);
        return m[idx];
    }
    if (!lattice) throw std::invalid_argument("finite configuration has no lattice offsets: " + id);
    std::string off = id.substr(at + 1);
    size_t comma = off.find(',');
    if (comma == std::string::npos) throw std::invalid_argument("unknown circle id: " + id);
    return translate(m[idx], *lattice, Int::parse(off.substr(0, comma)), Int::parse(off.substr(comma + 1)));
}

Configuration Configuration::to_float() const {
    Configuration c = *this;
    for (auto* list : {&c.base, &c.dual})
        for (Circle& x : *list) x = x.to_float();
    if (c.lattice)
        for (Point& p : *c.lattice) p = {p.x.to_float(), p.y.to_float()};
    for (auto& g : c.symmetries)
        for (Point* p : {&g.point, &g.vec, &g.shift}) *p = {p->x.to_float(), p->y.to_float()};
    return c;
}

Configuration scale_config(const Configuration& c, const Scalar& f) {
    Configuration out = c;
    auto sc = [&](Circle& x) {
        x.curvature = x.curvature / f;
        x.co_curvature = x.co_curvature * f;
    };
    for (auto* list : {&out.base, &out.dual})
        for (Circle& x : *list) sc(x);
    auto sp = [&](Point& p) { p = {p.x * f, p.y * f}; };
    if (out.lattice)
        for (Point& p : *out.lattice) sp(p);
    for (auto& g : out.symmetries) {
        sp(g.point);
        if (g.kind != "mirror" && g.kind != "glide") sp(g.vec);
        sp(g.shift);
    }
    return out;
}

Point tangency_point(const Circle& v, const Circle& w) {
    Scalar s = v.curvature + w.curvature;
    if (s.is_zero()) throw std::domain_error("tangency point at infinity");
    return {(v.h1 + w.h1) / s, (v.h2 + w.h2) / s};
}

Circle circle_through(const Point& p1, const Point& p2, const Point& p3) {
    Scalar d = Scalar(2) * (p1.x * (p2.y - p3.y) + p2.x * (p3.y - p1.y) + p3.x * (p1.y - p2.y));
    if (d.is_zero()) throw std::domain_error("collinear points have no circumcircle");
    Scalar n1 = p1.x * p1.x + p1.y * p1.y, n2 = p2.x * p2.x + p2.y * p2.y, n3 = p3.x * p3.x + p3.y * p3.y;
    Scalar ux = (n1 * (p2.y - p3.y) + n2 * (p3.y - p1.y) + n3 * (p1.y - p2.y)) / d;
    Scalar uy = (n1 * (p3.x - p2.x) + n2 * (p1.x - p3.x) + n3 * (p2.x - p1.x)) / d;
    Scalar r2 = (p1.x - ux) * (p1.x - ux) + (p1.y - uy) * (p1.y - uy);
    auto r = r2.sqrt();
    if (!r) throw std::domain_error("circumradius is not in the field: r^2 = " + r2.str());
    return from_center_radius({ux, uy}, *r);
}

// Reduce a circle modulo the lattice so its center lies in the half-open
// fundamental parallelogram.
Circle reduce_mod_lattice(const Circle& c, const std::array<Point, 2>& L) {
    auto [s, t] = lattice_coords(L, c.center());
    Int i = floor_of(s), j = floor_of(t);
    return translate(c, L, -i, -j);
}

std::string to_string(KleinianClass k) {
    switch (k) {
        case KleinianClass::finite: return "finite";
        case KleinianClass::strip_with_translation: return "strip-with-translation";
        case KleinianClass::doubly_periodic: return "doubly-periodic";
        case KleinianClass::unclassified: return "unclassified";
    }
    return "?";
}

KleinianClass kleinian_class(const Configuration& c) {
    if (!c.lattice) {
        if (c.declared_group == "finite" && !c.base.empty()) return KleinianClass::finite;
        return KleinianClass::unclassified;
    }
    // every motif circle translated by a lattice vector must be a configuration circle
    int verified = 0;
    for (const Point& v : *c.lattice) {
        bool ok = true;
        for (CircleKind k : {CircleKind::base, CircleKind::dual})
            for (const Circle& m : c.motif(k))
                if (!c.locate(apply_isometry(Isometry::translation(v), m), k)) ok = false;
        if (ok) ++verified;
    }
    if (verified == 2) {
        Scalar det = (*c.lattice)[0].x * (*c.lattice)[1].y - (*c.lattice)[0].y * (*c.lattice)[1].x;
        if (!det.is_zero()) return KleinianClass::doubly_periodic;
    }
    if (verified >= 1) return KleinianClass::strip_with_translation;
    return KleinianClass::unclassified;
}

}  // namespace cpack
