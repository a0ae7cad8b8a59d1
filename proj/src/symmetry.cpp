#include "cpack/symmetry.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

namespace cpack {

std::string SymmetrySignature::str() const {
    return "rotation_order=" + std::to_string(rotation_order) + " reflection=" + (has_reflection ? "yes" : "no") +
           " off_axis_glide=" + (has_off_axis_glide ? "yes" : "no") +
           " centers_on_mirrors=" + (centers_on_mirrors ? "yes" : "no") +
           " mirror_directions=" + std::to_string(mirror_directions);
}

std::string group_from_signature(const SymmetrySignature& s) {
    switch (s.rotation_order) {
        case 1:
            if (s.has_reflection) return s.has_off_axis_glide ? "cm" : "pm";
            return s.has_off_axis_glide ? "pg" : "p1";
        case 2:
            if (!s.has_reflection) return s.has_off_axis_glide ? "pgg" : "p2";
            if (s.mirror_directions == 1) return "pmg";
            return s.has_off_axis_glide ? "cmm" : "pmm";
        case 3:
            if (!s.has_reflection) return "p3";
            return s.centers_on_mirrors ? "p3m1" : "p31m";
        case 4:
            if (!s.has_reflection) return "p4";
            return s.centers_on_mirrors ? "p4m" : "p4g";
        case 6: return s.has_reflection ? "p6m" : "p6";
    }
    throw std::logic_error("rotation order " + std::to_string(s.rotation_order) + " is not crystallographic");
}

namespace {

using Mat = std::array<long long, 4>;  // row major 2x2

// isometry in lattice coordinates: x -> A x + t with t reduced modulo Z^2
struct Elem {
    Mat a;
    QuadExt t0, t1;

    std::string key() const {
        return std::to_string(a[0]) + "," + std::to_string(a[1]) + "," + std::to_string(a[2]) + "," +
               std::to_string(a[3]) + ";" + t0.str() + "," + t1.str();
    }
    long long det() const { return a[0] * a[3] - a[1] * a[2]; }
};

QuadExt frac(const QuadExt& x) {
    Int f = floor_of(Scalar(x));
    return x - QuadExt(f);
}

bool is_int(const QuadExt& x) { return x.is_integer(); }

Elem make_elem(const Mat& a, const QuadExt& t0, const QuadExt& t1) { return {a, frac(t0), frac(t1)}; }

Mat mat_mul(const Mat& x, const Mat& y) {
    return {x[0] * y[0] + x[1] * y[2], x[0] * y[1] + x[1] * y[3], x[2] * y[0] + x[3] * y[2], x[2] * y[1] + x[3] * y[3]};
}

Elem mul(const Elem& x, const Elem& y) {
    QuadExt u0 = QuadExt(x.a[0]) * y.t0 + QuadExt(x.a[1]) * y.t1 + x.t0;
    QuadExt u1 = QuadExt(x.a[2]) * y.t0 + QuadExt(x.a[3]) * y.t1 + x.t1;
    return make_elem(mat_mul(x.a, y.a), u0, u1);
}

std::optional<Elem> to_elem(const Isometry& g, const std::array<Point, 2>& L) {
    // Cartesian linear part
    Scalar m00 = g.ar, m01 = g.conj ? g.ai : -g.ai, m10 = g.ai, m11 = g.conj ? -g.ar : g.ar;
    Scalar l00 = L[0].x, l01 = L[1].x, l10 = L[0].y, l11 = L[1].y;
    Scalar det = l00 * l11 - l01 * l10;
    Scalar i00 = l11 / det, i01 = -l01 / det, i10 = -l10 / det, i11 = l00 / det;
    // A = L^-1 M L
    Scalar p00 = m00 * l00 + m01 * l10, p01 = m00 * l01 + m01 * l11;
    Scalar p10 = m10 * l00 + m11 * l10, p11 = m10 * l01 + m11 * l11;
    Scalar a[4] = {i00 * p00 + i01 * p10, i00 * p01 + i01 * p11, i10 * p00 + i11 * p10, i10 * p01 + i11 * p11};
    Mat m;
    for (int k = 0; k < 4; ++k) {
        Int v;
        if (!a[k].exact() || !integer_value(a[k], v) || !v.is_small()) return std::nullopt;
        m[k] = v.small();
    }
    Scalar t0 = i00 * g.tr + i01 * g.ti, t1 = i10 * g.tr + i11 * g.ti;
    if (!t0.exact() || !t1.exact() || !t0.q().is_rational() || !t1.q().is_rational()) return std::nullopt;
    return make_elem(m, t0.q(), t1.q());
}

Elem identity_elem() { return make_elem({1, 0, 0, 1}, QuadExt(0), QuadExt(0)); }

std::vector<Elem> closure(const std::vector<Elem>& gens) {
    std::map<std::string, Elem> all{{identity_elem().key(), identity_elem()}};
    std::vector<Elem> frontier{identity_elem()};
    while (!frontier.empty()) {
        std::vector<Elem> next;
        for (const auto& x : frontier)
            for (const auto& g : gens) {
                Elem y = mul(g, x);
                if (all.emplace(y.key(), y).second) next.push_back(y);
            }
        if (all.size() > 48) throw std::logic_error("symmetry closure is not finite modulo the lattice");
        frontier = std::move(next);
    }
    std::vector<Elem> out;
    for (auto& [k, e] : all) out.push_back(e);
    return out;
}

int rotation_order(const Mat& a) {
    Mat p = a;
    Mat id{1, 0, 0, 1};
    for (int k = 1; k <= 6; ++k) {
        if (p == id) return k;
        p = mat_mul(p, a);
    }
    return 0;
}

long long igcd(long long x, long long y) {
    x = std::llabs(x);
    y = std::llabs(y);
    while (y) {
        long long r = x % y;
        x = y;
        y = r;
    }
    return x;
}

// the coset of a reflection element (A, t) contains a mirror iff (A+I) t lies in (A+I) Z^2
bool coset_has_mirror(const Elem& e) {
    long long b00 = e.a[0] + 1, b01 = e.a[1], b10 = e.a[2], b11 = e.a[3] + 1;
    QuadExt y0 = -(QuadExt(b00) * e.t0 + QuadExt(b01) * e.t1);
    QuadExt y1 = -(QuadExt(b10) * e.t0 + QuadExt(b11) * e.t1);
    long long cx = b00, cy = b10;
    if (cx == 0 && cy == 0) {
        cx = b01;
        cy = b11;
    }
    long long g0 = igcd(cx, cy);
    long long ux = cx / g0, uy = cy / g0;
    auto coeff = [&](long long x, long long y) { return ux != 0 ? x / ux : y / uy; };
    long long g = igcd(coeff(b00, b10), coeff(b01, b11));
    QuadExt lambda = ux != 0 ? y0 / QuadExt(ux) : y1 / QuadExt(uy);
    if (lambda * QuadExt(ux) != y0 || lambda * QuadExt(uy) != y1) return false;
    return is_int(lambda / QuadExt(g));
}

// the coset holds a glide whose translation part is not a lattice vector
bool coset_has_glide(const Elem& e) {
    long long b00 = e.a[0] + 1, b01 = e.a[1], b10 = e.a[2], b11 = e.a[3] + 1;
    for (int l0 = 0; l0 < 2; ++l0)
        for (int l1 = 0; l1 < 2; ++l1) {
            QuadExt s0 = e.t0 + QuadExt(l0), s1 = e.t1 + QuadExt(l1);
            QuadExt g0 = (QuadExt(b00) * s0 + QuadExt(b01) * s1) / QuadExt(2);
            QuadExt g1 = (QuadExt(b10) * s0 + QuadExt(b11) * s1) / QuadExt(2);
            if (!is_int(g0) || !is_int(g1)) return true;
        }
    return false;
}

SymmetrySignature signature_of(const std::vector<Elem>& group) {
    SymmetrySignature s;
    std::vector<Elem> mirrors;
    std::vector<Mat> mirror_mats;
    for (const auto& e : group) {
        if (e.det() == 1) {
            s.rotation_order = std::max(s.rotation_order, rotation_order(e.a));
            continue;
        }
        if (coset_has_mirror(e)) {
            mirrors.push_back(e);
            if (std::find(mirror_mats.begin(), mirror_mats.end(), e.a) == mirror_mats.end()) mirror_mats.push_back(e.a);
        }
        if (coset_has_glide(e)) s.has_off_axis_glide = true;
    }
    s.has_reflection = !mirrors.empty();
    s.mirror_directions = static_cast<int>(mirror_mats.size());
    if (s.has_reflection && (s.rotation_order == 3 || s.rotation_order == 4)) {
        bool all_on = true;
        for (const auto& e : group) {
            if (e.det() != 1 || rotation_order(e.a) != s.rotation_order) continue;
            // centers c = (I - A)^-1 (t + l) over l modulo the image lattice
            long long n00 = 1 - e.a[0], n01 = -e.a[1], n10 = -e.a[2], n11 = 1 - e.a[3];
            long long d = n00 * n11 - n01 * n10;
            long long m = std::llabs(d);
            for (long long l0 = 0; l0 < m; ++l0)
                for (long long l1 = 0; l1 < m; ++l1) {
                    QuadExt s0 = e.t0 + QuadExt(l0), s1 = e.t1 + QuadExt(l1);
                    QuadExt c0 = (QuadExt(n11) * s0 - QuadExt(n01) * s1) / QuadExt(d);
                    QuadExt c1 = (QuadExt(-n10) * s0 + QuadExt(n00) * s1) / QuadExt(d);
                    bool on = false;
                    for (const auto& r : mirrors) {
                        QuadExt f0 = c0 - (QuadExt(r.a[0]) * c0 + QuadExt(r.a[1]) * c1) - r.t0;
                        QuadExt f1 = c1 - (QuadExt(r.a[2]) * c0 + QuadExt(r.a[3]) * c1) - r.t1;
                        if (is_int(f0) && is_int(f1)) {
                            on = true;
                            break;
                        }
                    }
                    if (!on) all_on = false;
                }
        }
        s.centers_on_mirrors = all_on;
    }
    return s;
}

std::vector<LabeledCircle> circles_for_check(const Configuration& cfg, const Window& w) {
    if (!cfg.periodic()) {
        std::vector<LabeledCircle> out;
        for (CircleKind k : {CircleKind::base, CircleKind::dual})
            for (size_t i = 0; i < cfg.motif(k).size(); ++i)
                out.push_back({make_circle_id(k, i, std::nullopt), k, cfg.motif(k)[i]});
        return out;
    }
    return cfg.all_circles(safe_interior(cfg, w));
}

Isometry with_translation(Isometry lin, const Point& t) {
    lin.tr = t.x;
    lin.ti = t.y;
    return lin;
}

std::vector<Isometry> point_group(int field_d) {
    std::vector<Isometry> out;
    Point o{Scalar(0), Scalar(0)};
    if (field_d == 3) {
        Scalar s3(QuadExt::sqrt_of(3));
        for (int k = 0; k < 6; ++k) out.push_back(Isometry::rotation(o, 6, k));
        for (Point u : {Point{Scalar(1), Scalar(0)}, Point{s3, Scalar(1)}, Point{Scalar(1), s3}, Point{Scalar(0), Scalar(1)},
                        Point{Scalar(-1), s3}, Point{-s3, Scalar(1)}})
            out.push_back(Isometry::mirror(o, u));
    } else {
        for (int k = 0; k < 4; ++k) out.push_back(Isometry::rotation(o, 4, k));
        for (Point u : {Point{Scalar(1), Scalar(0)}, Point{Scalar(0), Scalar(1)}, Point{Scalar(1), Scalar(1)},
                        Point{Scalar(1), Scalar(-1)}})
            out.push_back(Isometry::mirror(o, u));
    }
    return out;
}

std::vector<Elem> declared_group(const Configuration& cfg, std::vector<std::string>* failures) {
    std::vector<Elem> gens;
    for (const auto& s : cfg.symmetries) {
        auto e = to_elem(s.isometry(), *cfg.lattice);
        if (!e) {
            if (failures) failures->push_back(s.kind + " does not normalize the lattice");
            continue;
        }
        gens.push_back(*e);
    }
    return closure(gens);
}

}  // namespace

Window verification_window(const Configuration& cfg) {
    if (cfg.periodic()) {
        // the safe interior of [-2m, 2m]^2 is [-m, m]^2, which holds a whole cell
        Window probe{Scalar(-1), Scalar(1), Scalar(-1), Scalar(1)};
        Scalar m = safe_interior(cfg, probe).xmax - Scalar(1);
        Scalar r = Scalar(-2) * m;
        return {-r, r, -r, r};
    }
    double ext = 1;
    for (CircleKind k : {CircleKind::base, CircleKind::dual})
        for (const Circle& c : cfg.motif(k))
            if (!c.is_line())
                ext = std::max({ext, std::fabs(c.center_x_f()) + c.radius_f(), std::fabs(c.center_y_f()) + c.radius_f()});
    Scalar r(static_cast<long long>(std::ceil(ext)) + 1);
    return {-r, r, -r, r};
}

bool verify_isometry(const Configuration& cfg, const Isometry& g, const Window& w, std::string* witness) {
    if (cfg.periodic() && !safe_interior(cfg, w).valid()) {
        if (witness) *witness = "window " + w.str() + " has an empty safe interior";
        return false;
    }
    for (const auto& c : circles_for_check(cfg, w)) {
        if (!cfg.locate(apply_isometry(g, c.circle), c.kind)) {
            if (witness) *witness = c.id;
            return false;
        }
    }
    return true;
}

bool verify_isometry(const Configuration& cfg, const Isometry& g, std::string* witness) {
    return verify_isometry(cfg, g, verification_window(cfg), witness);
}

bool preserves(const Configuration& cfg, const Isometry& g) {
    if (cfg.periodic() && !to_elem(g, *cfg.lattice)) return false;
    for (CircleKind k : {CircleKind::base, CircleKind::dual})
        for (const Circle& m : cfg.motif(k))
            if (!cfg.locate(apply_isometry(g, m), k)) return false;
    return true;
}

Classification classify_wallpaper(const Configuration& cfg) {
    Classification out;
    for (const auto& s : cfg.symmetries) {
        std::string witness;
        if (!verify_isometry(cfg, s.isometry(), &witness)) out.failures.push_back(s.kind + " fails at " + witness);
    }
    if (!cfg.periodic()) {
        if (out.failures.empty() && cfg.declared_group == "finite") out.group = "finite";
        return out;
    }
    std::vector<Elem> group = declared_group(cfg, &out.failures);
    if (!out.failures.empty()) return out;
    std::vector<Mat> linear;
    for (const auto& e : group)
        if (std::find(linear.begin(), linear.end(), e.a) == linear.end()) linear.push_back(e.a);
    out.point_group_order = linear.size();
    out.signature = signature_of(group);
    out.group = group_from_signature(out.signature);
    return out;
}

std::optional<std::array<Point, 2>> translations(const Configuration& cfg) {
    if (!cfg.periodic()) return std::nullopt;
    for (const Point& v : *cfg.lattice)
        if (!verify_isometry(cfg, Isometry::translation(v))) return std::nullopt;
    return *cfg.lattice;
}

Discovery discover_symmetries(const Configuration& cfg) {
    Discovery out;
    if (!cfg.periodic() || cfg.base.empty()) return out;
    const auto& L = *cfg.lattice;
    // the rarest curvature class of the base motif limits the candidate images
    std::map<std::string, std::vector<size_t>> classes;
    for (size_t i = 0; i < cfg.base.size(); ++i) classes[cfg.base[i].curvature.str()].push_back(i);
    const std::vector<size_t>* rare = nullptr;
    for (const auto& [k, v] : classes)
        if (!rare || v.size() < rare->size()) rare = &v;
    const Circle& m0 = cfg.base[rare->front()];
    Point c0 = m0.center();
    std::map<std::string, bool> seen;
    for (const Isometry& lin : point_group(cfg.field_d)) {
        Point image = lin.apply(c0);
        for (size_t j : *rare) {
            Point cj = cfg.base[j].center();
            Isometry g = with_translation(lin, {cj.x - image.x, cj.y - image.y});
            if (!preserves(cfg, g)) continue;
            auto e = to_elem(g, L);
            if (!e || !seen.emplace(e->key(), true).second) continue;
            out.found.push_back(g);
        }
    }
    std::map<std::string, bool> declared;
    for (const auto& e : declared_group(cfg, nullptr)) declared[e.key()] = true;
    for (const auto& g : out.found)
        if (!declared.count(to_elem(g, L)->key())) out.undeclared.push_back(g);
    return out;
}

}  // namespace cpack
