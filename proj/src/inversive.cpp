#include "cpack/inversive.hpp"

#include <cmath>
#include <stdexcept>

namespace cpack {

namespace {

Scalar dot(const Point& p, const Point& q) { return p.x * q.x + p.y * q.y; }
Point sub(const Point& p, const Point& q) { return {p.x - q.x, p.y - q.y}; }
Point add(const Point& p, const Point& q) { return {p.x + q.x, p.y + q.y}; }
Point scale(const Scalar& s, const Point& p) { return {s * p.x, s * p.y}; }
bool same_point(const Point& p, const Point& q, double tol) {
    if (p.x.exact() && p.y.exact() && q.x.exact() && q.y.exact()) return p.x == q.x && p.y == q.y;
    return std::fabs(p.x.f() - q.x.f()) <= tol && std::fabs(p.y.f() - q.y.f()) <= tol;
}
bool same_scalar(const Scalar& a, const Scalar& b, double tol) {
    if (a.exact() && b.exact()) return a == b;
    return std::fabs(a.f() - b.f()) <= tol;
}

}  // namespace

Point Circle::center() const {
    if (is_line()) throw std::domain_error("a line has no center");
    return {h1 / curvature, h2 / curvature};
}

Scalar Circle::radius() const {
    if (is_line()) throw std::domain_error("a line has no radius");
    return Scalar(1) / curvature.abs();
}

double Circle::radius_f() const {
    double b = curvature.f();
    return b == 0.0 ? INFINITY : 1.0 / std::fabs(b);
}

Scalar Circle::quadric_defect() const { return h1 * h1 + h2 * h2 - curvature * co_curvature - Scalar(1); }

Circle Circle::to_float() const {
    return {co_curvature.to_float(), curvature.to_float(), h1.to_float(), h2.to_float()};
}

bool Circle::same(const Circle& o) const {
    return co_curvature == o.co_curvature && curvature == o.curvature && h1 == o.h1 && h2 == o.h2;
}

std::string Circle::str() const {
    return "(" + co_curvature.str() + ", " + curvature.str() + ", " + h1.str() + ", " + h2.str() + ")";
}

Circle from_center_radius(const Point& center, const Scalar& radius, Orientation o) {
    if (radius.sign() <= 0) throw std::invalid_argument("radius must be positive");
    Scalar b = Scalar(1) / radius;
    if (o == Orientation::interior_unbounded) b = -b;
    Scalar bt = b * (center.x * center.x + center.y * center.y - radius * radius);
    return {bt, b, b * center.x, b * center.y};
}

Circle from_line(const Point& n, const Scalar& offset) {
    if ((n.x * n.x + n.y * n.y - Scalar(1)).sign() != 0) throw std::invalid_argument("line normal must be a unit vector");
    return {Scalar(2) * offset, Scalar(0), n.x, n.y};
}

Scalar inversive_product(const Circle& v, const Circle& w) {
    Scalar cross = v.curvature * w.co_curvature + v.co_curvature * w.curvature;
    return v.h1 * w.h1 + v.h2 * w.h2 - cross / Scalar(2);
}

Circle reflect(const Circle& m, const Circle& v) {
    // v - 2 <v, m> m, with 2<v,m> computed without the half
    Scalar k = Scalar(2) * (v.h1 * m.h1 + v.h2 * m.h2) - (v.curvature * m.co_curvature + v.co_curvature * m.curvature);
    return {v.co_curvature - k * m.co_curvature, v.curvature - k * m.curvature, v.h1 - k * m.h1, v.h2 - k * m.h2};
}

std::string to_string(PairClass c) {
    switch (c) {
        case PairClass::equal: return "equal";
        case PairClass::opposite: return "opposite";
        case PairClass::externally_tangent: return "externally-tangent";
        case PairClass::internally_tangent: return "internally-tangent";
        case PairClass::orthogonal: return "orthogonal";
        case PairClass::disjoint_exteriors: return "disjoint-exteriors";
        case PairClass::nested: return "nested";
        case PairClass::crossing: return "crossing";
    }
    return "?";
}

PairClass pair_class_from_string(const std::string& s) {
    for (PairClass c : {PairClass::equal, PairClass::opposite, PairClass::externally_tangent,
                        PairClass::internally_tangent, PairClass::orthogonal, PairClass::disjoint_exteriors,
                        PairClass::nested, PairClass::crossing})
        if (to_string(c) == s) return c;
    throw std::invalid_argument("unknown pair class: " + s);
}

PairClass classify_pair(const Circle& v, const Circle& w) {
    if (v.same(w)) return PairClass::equal;
    if (v.same(-w)) return PairClass::opposite;
    Scalar p = inversive_product(v, w);
    int lo = compare(p, Scalar(-1));
    int hi = compare(p, Scalar(1));
    if (lo == 0) return PairClass::externally_tangent;
    if (hi == 0) return PairClass::internally_tangent;
    if (p.sign() == 0) return PairClass::orthogonal;
    if (lo < 0) return PairClass::disjoint_exteriors;
    if (hi > 0) return PairClass::nested;
    return PairClass::crossing;
}

bool inside(const Circle& v, const Circle& w) {
    if (v.same(w)) return false;
    if (inversive_product(v, w) < Scalar(1)) return false;
    if (v.curvature.sign() <= 0) return false;
    return w.curvature.sign() <= 0 || v.curvature > w.curvature;
}

GeoCircle to_geometric(const Circle& c) {
    GeoCircle g;
    if (c.is_line()) {
        g.is_line = true;
        g.normal = {c.h1, c.h2};
        g.offset = c.co_curvature / Scalar(2);
    } else {
        g.center = c.center();
        g.radius = c.radius();
    }
    return g;
}

GeoCircle reflect_geometric(const GeoCircle& mirror, const GeoCircle& v) {
    GeoCircle out;
    if (mirror.is_line) {
        const Point& n = mirror.normal;
        auto refl = [&](const Point& p) { return sub(p, scale(Scalar(2) * (dot(p, n) - mirror.offset), n)); };
        if (!v.is_line) {
            out.center = refl(v.center);
            out.radius = v.radius;
        } else {
            out.is_line = true;
            Point m = sub(v.normal, scale(Scalar(2) * dot(v.normal, n), n));
            Point p0 = refl(scale(v.offset, v.normal));
            out.normal = m;
            out.offset = dot(p0, m);
        }
        return out;
    }
    const Point& q = mirror.center;
    Scalar R2 = mirror.radius * mirror.radius;
    if (!v.is_line) {
        Point cq = sub(v.center, q);
        Scalar D2 = dot(cq, cq) - v.radius * v.radius;
        if (D2.is_zero()) {
            // v passes through the mirror center: the image is a line
            out.is_line = true;
            out.normal = scale(Scalar(1) / v.radius, cq);
            out.offset = dot(q, out.normal) + R2 / (Scalar(2) * v.radius);
            return out;
        }
        out.radius = (R2 * v.radius / D2).abs();
        out.center = add(q, scale(R2 / D2, cq));
        return out;
    }
    Scalar delta = v.offset - dot(q, v.normal);
    if (delta.is_zero()) return v;
    out.center = add(q, scale(R2 / (Scalar(2) * delta), v.normal));
    out.radius = (R2 / (Scalar(2) * delta)).abs();
    return out;
}

bool same_geometric(const GeoCircle& a, const GeoCircle& b, double tol) {
    if (a.is_line != b.is_line) return false;
    if (!a.is_line) return same_point(a.center, b.center, tol) && same_scalar(a.radius, b.radius, tol);
    if (same_point(a.normal, b.normal, tol)) return same_scalar(a.offset, b.offset, tol);
    Point nb = {-b.normal.x, -b.normal.y};
    return same_point(a.normal, nb, tol) && same_scalar(a.offset, -b.offset, tol);
}

Isometry Isometry::translation(const Point& v) {
    Isometry g;
    g.tr = v.x;
    g.ti = v.y;
    return g;
}

Isometry Isometry::rotation(const Point& c, int n, int k) {
    if (n != 1 && n != 2 && n != 3 && n != 4 && n != 6) throw std::invalid_argument("rotation order must be 1, 2, 3, 4 or 6");
    int m = (((12 / n) * k) % 12 + 12) % 12;
    Scalar half = Scalar(QuadExt::rational(1, 2));
    Scalar r3 = Scalar(QuadExt::normalize(0, 1, 2, 3));
    Scalar cs, sn;
    switch (m) {
        case 0: cs = 1; sn = 0; break;
        case 2: cs = half; sn = r3; break;
        case 3: cs = 0; sn = 1; break;
        case 4: cs = -half; sn = r3; break;
        case 6: cs = -1; sn = 0; break;
        case 8: cs = -half; sn = -r3; break;
        case 9: cs = 0; sn = -1; break;
        case 10: cs = half; sn = -r3; break;
        default: throw std::logic_error("unreachable rotation angle");
    }
    Isometry g;
    g.ar = cs;
    g.ai = sn;
    // t = c - a c
    g.tr = c.x - (cs * c.x - sn * c.y);
    g.ti = c.y - (sn * c.x + cs * c.y);
    return g;
}

Isometry Isometry::mirror(const Point& p, const Point& u) {
    Scalar n2 = u.x * u.x + u.y * u.y;
    if (n2.is_zero()) throw std::invalid_argument("mirror direction must be nonzero");
    Isometry g;
    g.conj = true;
    g.ar = (u.x * u.x - u.y * u.y) / n2;
    g.ai = Scalar(2) * u.x * u.y / n2;
    // t = p - a conj(p)
    g.tr = p.x - (g.ar * p.x + g.ai * p.y);
    g.ti = p.y - (g.ai * p.x - g.ar * p.y);
    return g;
}

Isometry Isometry::glide(const Point& p, const Point& u, const Point& shift) {
    Isometry g = mirror(p, u);
    if (!(u.x * shift.y - u.y * shift.x).is_zero()) throw std::invalid_argument("glide shift must be parallel to the axis");
    g.tr += shift.x;
    g.ti += shift.y;
    return g;
}

Point Isometry::apply(const Point& z) const {
    Scalar zx = z.x, zy = conj ? -z.y : z.y;
    return {ar * zx - ai * zy + tr, ai * zx + ar * zy + ti};
}

Isometry Isometry::inverse() const {
    Isometry g;
    g.conj = conj;
    if (!conj) {
        // a' = conj(a), t' = -conj(a) t
        g.ar = ar;
        g.ai = -ai;
        g.tr = -(ar * tr + ai * ti);
        g.ti = -(ar * ti - ai * tr);
    } else {
        // a' = a, t' = -a conj(t)
        g.ar = ar;
        g.ai = ai;
        g.tr = -(ar * tr + ai * ti);
        g.ti = -(ai * tr - ar * ti);
    }
    return g;
}

bool Isometry::same(const Isometry& o) const {
    return conj == o.conj && ar == o.ar && ai == o.ai && tr == o.tr && ti == o.ti;
}

bool Isometry::is_identity() const { return same(identity()); }

std::string Isometry::str() const {
    return std::string(conj ? "z -> (" : "z -> (") + ar.str() + " + " + ai.str() + "i) " + (conj ? "conj(z)" : "z") +
           " + (" + tr.str() + " + " + ti.str() + "i)";
}

Isometry compose(const Isometry& g, const Isometry& h) {
    Isometry r;
    r.conj = g.conj != h.conj;
    Scalar hai = g.conj ? -h.ai : h.ai;
    Scalar hti = g.conj ? -h.ti : h.ti;
    r.ar = g.ar * h.ar - g.ai * hai;
    r.ai = g.ar * hai + g.ai * h.ar;
    r.tr = g.ar * h.tr - g.ai * hti + g.tr;
    r.ti = g.ar * hti + g.ai * h.tr + g.ti;
    return r;
}

Circle apply_isometry(const Isometry& g, const Circle& v) {
    Scalar hx = v.h1, hy = g.conj ? -v.h2 : v.h2;
    // a h (or a conj(h))
    Scalar ahx = g.ar * hx - g.ai * hy;
    Scalar ahy = g.ai * hx + g.ar * hy;
    Circle out;
    out.curvature = v.curvature;
    out.h1 = ahx + v.curvature * g.tr;
    out.h2 = ahy + v.curvature * g.ti;
    Scalar t2 = g.tr * g.tr + g.ti * g.ti;
    out.co_curvature = v.co_curvature + Scalar(2) * (ahx * g.tr + ahy * g.ti) + v.curvature * t2;
    return out;
}

}  // namespace cpack
