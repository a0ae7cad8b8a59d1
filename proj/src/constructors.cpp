#include "cpack/config.hpp"

#include <algorithm>
#include <stdexcept>

namespace cpack {

namespace {

Scalar q(long long a, long long b, long long den, int d) { return Scalar(QuadExt::normalize(a, b, den, d)); }
Scalar rat(long long a, long long den = 1) { return Scalar(QuadExt::rational(a, den)); }

Point pt(long long x, long long y) { return {Scalar(x), Scalar(y)}; }

SymmetryGenerator translation(const Point& v) { return {"translation", pt(0, 0), v, 1, pt(0, 0)}; }
SymmetryGenerator rotation(const Point& c, int n) { return {"rotation", c, pt(0, 0), n, pt(0, 0)}; }
SymmetryGenerator mirror(const Point& p, const Point& u) { return {"mirror", p, u, 1, pt(0, 0)}; }
SymmetryGenerator glide(const Point& p, const Point& u, const Point& s) { return {"glide", p, u, 1, s}; }

void add_unique(std::vector<Circle>& out, const Circle& c) {
    if (std::none_of(out.begin(), out.end(), [&](const Circle& o) { return o.same(c); })) out.push_back(c);
}

void sort_motif(std::vector<Circle>& m, const std::array<Point, 2>& L) {
    std::sort(m.begin(), m.end(), [&](const Circle& a, const Circle& b) {
        if (a.curvature != b.curvature) return a.curvature < b.curvature;
        auto [sa, ta] = lattice_coords(L, a.center());
        auto [sb, tb] = lattice_coords(L, b.center());
        if (sa != sb) return sa < sb;
        return ta < tb;
    });
}

// underlying packing circles (radius 1 at the given lattice points) reduced
// modulo the refined lattice
void add_underlying(std::vector<Circle>& out, const std::array<Point, 2>& L, const Point& u1, const Point& u2) {
    for (long long i = -8; i <= 8; ++i)
        for (long long j = -8; j <= 8; ++j) {
            Point c{Scalar(i) * u1.x + Scalar(j) * u2.x, Scalar(i) * u1.y + Scalar(j) * u2.y};
            add_unique(out, reduce_mod_lattice(from_center_radius(c, Scalar(1)), L));
        }
}

Configuration finish(const std::string& name, int d, std::vector<Circle> base, const std::array<Point, 2>& L,
                     std::vector<SymmetryGenerator> extra, const std::string& group) {
    Configuration c;
    c.name = name;
    c.field_d = d;
    sort_motif(base, L);
    c.base = std::move(base);
    c.dual = derive_dual_motif(c.base, L);
    c.lattice = L;
    c.symmetries = {translation(L[0]), translation(L[1])};
    c.symmetries.insert(c.symmetries.end(), extra.begin(), extra.end());
    c.declared_group = group;
    return c;
}

Configuration apollonian() {
    Configuration c;
    c.name = "apollonian";
    c.field_d = 3;
    Scalar s3 = q(0, 1, 1, 3);
    Scalar r = s3 / Scalar(2);
    c.base = {from_center_radius(pt(1, 0), r), from_center_radius({rat(-1, 2), s3 / Scalar(2)}, r),
              from_center_radius({rat(-1, 2), -s3 / Scalar(2)}, r),
              from_center_radius(pt(0, 0), Scalar(1) + r, Orientation::interior_unbounded)};
    Scalar dist = Scalar(2) + s3;
    Scalar R = rat(3, 2) + s3;
    Scalar hx = dist / Scalar(2), hy = dist * s3 / Scalar(2);
    c.dual = {from_center_radius(pt(0, 0), rat(1, 2)), from_center_radius({hx, hy}, R),
              from_center_radius({-dist, Scalar(0)}, R), from_center_radius({hx, -hy}, R)};
    c.symmetries = {rotation(pt(0, 0), 3), mirror(pt(0, 0), pt(1, 0))};
    c.declared_group = "finite";
    return c;
}

Configuration square() {
    Configuration c;
    c.name = "square";
    c.field_d = 1;
    c.base = {from_center_radius(pt(0, 0), Scalar(1))};
    c.dual = {from_center_radius(pt(1, 1), Scalar(1))};
    c.lattice = std::array<Point, 2>{pt(2, 0), pt(0, 2)};
    c.symmetries = {translation(pt(2, 0)), translation(pt(0, 2)), rotation(pt(0, 0), 4), mirror(pt(0, 0), pt(1, 0))};
    c.declared_group = "p4m";
    return c;
}

Configuration triangular() {
    Configuration c;
    c.name = "triangular";
    c.field_d = 3;
    Scalar s3 = q(0, 1, 1, 3);
    Scalar rd = s3 / Scalar(3);
    c.base = {from_center_radius(pt(0, 0), Scalar(1))};
    c.dual = {from_center_radius({Scalar(1), rd}, rd), from_center_radius({Scalar(2), Scalar(2) * rd}, rd)};
    c.lattice = std::array<Point, 2>{pt(2, 0), Point{Scalar(1), s3}};
    c.symmetries = {translation(pt(2, 0)), translation({Scalar(1), s3}), rotation(pt(0, 0), 6),
                    mirror(pt(0, 0), pt(1, 0))};
    c.declared_group = "p6m";
    return c;
}

Configuration hexagonal() {
    Configuration t = triangular();
    std::swap(t.base, t.dual);
    Configuration c = scale_config(t, q(0, 1, 1, 3));
    c.name = "hexagonal";
    sort_motif(c.base, *c.lattice);
    return c;
}

// refinements of the square packing: a radius sqrt2-1 circle in a face and
// radius (5-3 sqrt2)/7 circles between it and the chosen face edges
struct SquareFace {
    long long fx, fy;
    std::string dirs;
};

Configuration square_refined(const std::string& group, const std::array<long long, 4>& lat,
                             const std::vector<SquareFace>& faces, std::vector<SymmetryGenerator> gens) {
    std::array<Point, 2> L{pt(lat[0], lat[1]), pt(lat[2], lat[3])};
    std::vector<Circle> base;
    add_underlying(base, L, pt(2, 0), pt(0, 2));
    Scalar rm = q(-1, 1, 1, 2), rs = q(5, -3, 7, 2), ds = q(-2, 4, 7, 2);
    for (const auto& f : faces) {
        Point c = pt(f.fx, f.fy);
        add_unique(base, reduce_mod_lattice(from_center_radius(c, rm), L));
        for (char d : f.dirs) {
            Point s = c;
            if (d == 'N') s.y = s.y + ds;
            if (d == 'S') s.y = s.y - ds;
            if (d == 'E') s.x = s.x + ds;
            if (d == 'W') s.x = s.x - ds;
            add_unique(base, reduce_mod_lattice(from_center_radius(s, rs), L));
        }
    }
    return finish("wallpaper:" + group, faces.empty() ? 1 : 2, std::move(base), L, std::move(gens), group);
}

// triangular lattice vertex (i, j) sits at (2i + j, j sqrt3)
using Vertex = std::pair<long long, long long>;
using Triangle = std::array<Vertex, 3>;

Point tri_point(const Vertex& v) { return {Scalar(2 * v.first + v.second), Scalar(v.second) * q(0, 1, 1, 3)}; }
int colour(const Vertex& v) { return static_cast<int>((((v.first - v.second + 1) % 3) + 3) % 3); }
Triangle down(const Vertex& v) { return {v, Vertex{v.first, v.second + 1}, Vertex{v.first - 1, v.second + 1}}; }
Triangle up(const Vertex& v) { return {v, Vertex{v.first + 1, v.second}, Vertex{v.first, v.second + 1}}; }

// refinements of the triangular packing: a radius 2sqrt3/3-1 circle at the
// centroid of a face and radius 1/(9+4sqrt3) circles toward the edges
// opposite the vertices of the listed colours
Configuration triangular_refined(const std::string& group, const std::array<Point, 2>& L,
                                 const std::vector<Vertex>& downs, const std::vector<int>& down_colours,
                                 const std::vector<Vertex>& ups, const std::vector<int>& up_colours,
                                 std::vector<SymmetryGenerator> gens) {
    std::vector<Circle> base;
    add_underlying(base, L, pt(2, 0), tri_point({0, 1}));
    Scalar s3 = q(0, 1, 1, 3);
    Scalar rc = q(-3, 2, 3, 3), rt = q(9, -4, 33, 3);
    auto refine = [&](const Triangle& t, const std::vector<int>& colours) {
        Point p[3] = {tri_point(t[0]), tri_point(t[1]), tri_point(t[2])};
        Point g{(p[0].x + p[1].x + p[2].x) / Scalar(3), (p[0].y + p[1].y + p[2].y) / Scalar(3)};
        add_unique(base, reduce_mod_lattice(from_center_radius(g, rc), L));
        for (int c : colours) {
            int k = 0;
            while (colour(t[k]) != c) ++k;
            const Point& a = p[(k + 1) % 3];
            const Point& b = p[(k + 2) % 3];
            // the centroid sits sqrt3/3 from each edge midpoint
            Scalar ux = ((a.x + b.x) / Scalar(2) - g.x) * s3, uy = ((a.y + b.y) / Scalar(2) - g.y) * s3;
            Point ct{g.x + (rc + rt) * ux, g.y + (rc + rt) * uy};
            add_unique(base, reduce_mod_lattice(from_center_radius(ct, rt), L));
        }
    };
    for (const auto& v : downs) refine(down(v), down_colours);
    for (const auto& v : ups) refine(up(v), up_colours);
    return finish("wallpaper:" + group, 3, std::move(base), L, std::move(gens), group);
}

Configuration wallpaper(const std::string& g) {
    const Point o = pt(0, 0);
    if (g == "p1") return square_refined(g, {2, 0, 0, 4}, {{1, 1, "S"}, {1, -1, "W"}}, {});
    if (g == "p2") return square_refined(g, {4, 2, 0, 4}, {{-1, 1, "S"}, {1, -1, "N"}}, {rotation(o, 2)});
    if (g == "pm")
        return square_refined(g, {8, 0, 0, 4}, {{-1, 1, "N"}, {-3, 1, "N"}}, {mirror(pt(2, 0), pt(0, 1))});
    if (g == "pg")
        return square_refined(g, {4, 0, 0, 4}, {{-1, 1, "WN"}, {1, -1, "EN"}}, {glide(o, pt(0, 1), pt(0, 2))});
    if (g == "cm")
        return square_refined(g, {4, -2, 0, 4}, {{1, 1, "EN"}, {-1, -1, "WN"}}, {mirror(pt(2, 0), pt(0, 1))});
    if (g == "pmm")
        return square_refined(g, {8, 0, 0, 8}, {{-1, 1, "N"}, {-3, 1, "N"}, {-1, 3, "S"}, {-3, 3, "S"}},
                              {mirror(pt(2, 0), pt(0, 1)), mirror(pt(0, 2), pt(1, 0))});
    if (g == "pmg")
        return square_refined(g, {8, 0, 0, 8}, {{-1, 1, "N"}, {-1, 3, "S"}, {-3, -1, "S"}, {-3, -3, "N"}},
                              {mirror(pt(0, 2), pt(1, 0)), rotation(pt(2, 0), 2)});
    if (g == "pgg")
        return square_refined(g, {8, 0, 0, 8}, {{-1, 1, "N"}, {-3, 3, "S"}, {1, -3, "N"}, {3, -1, "S"}},
                              {rotation(pt(2, 2), 2), glide(o, pt(0, 1), pt(0, 4))});
    if (g == "cmm")
        return square_refined(g, {4, 4, 4, -4}, {{-1, 1, "S"}, {-3, 1, "S"}, {1, -1, "N"}, {3, -1, "N"}},
                              {mirror(pt(2, 0), pt(0, 1)), mirror(pt(0, 2), pt(1, 0)), rotation(o, 2)});
    if (g == "p4")
        return square_refined(g, {4, 0, 0, 4}, {{-1, 1, "N"}, {1, 1, "E"}, {-1, -1, "W"}, {1, -1, "S"}},
                              {rotation(o, 4)});
    if (g == "p4g")
        return square_refined(g, {8, 0, 0, 8},
                              {{-1, 1, "N"}, {1, 1, "E"}, {-1, -1, "W"}, {1, -1, "S"},
                               {5, 1, "N"}, {3, 1, "W"}, {5, -1, "E"}, {3, -1, "S"},
                               {-1, 3, "S"}, {1, 3, "E"}, {-1, 5, "W"}, {1, 5, "N"},
                               {5, 3, "S"}, {3, 3, "W"}, {5, 5, "E"}, {3, 5, "N"}},
                              {rotation(o, 4), mirror(pt(2, 0), pt(0, 1))});
    if (g == "p4m") return square_refined(g, {2, 0, 0, 2}, {}, {rotation(o, 4), mirror(o, pt(1, 0))});

    Scalar s3 = q(0, 1, 1, 3);
    std::array<Point, 2> tri{pt(2, 0), Point{Scalar(1), s3}};
    std::array<Point, 2> big{Point{Scalar(3), s3}, Point{Scalar(0), Scalar(2) * s3}};
    const std::vector<Vertex> downs{{0, 0}, {0, -1}, {1, -1}}, ups{{0, 0}, {1, 0}, {2, 0}};
    if (g == "p3") return triangular_refined(g, big, downs, {0}, ups, {0, 2}, {rotation(o, 3)});
    if (g == "p31m")
        return triangular_refined(g, big, downs, {0}, {}, {}, {rotation(o, 3), mirror(pt(1, 0), pt(0, 1))});
    if (g == "p3m1")
        return triangular_refined(g, tri, {{0, 0}}, {}, {}, {}, {rotation(o, 3), mirror(o, pt(0, 1))});
    if (g == "p6") return triangular_refined(g, big, downs, {0}, ups, {2}, {rotation(o, 6)});
    if (g == "p6m") return triangular_refined(g, tri, {}, {}, {}, {}, {rotation(o, 6), mirror(o, pt(1, 0))});
    throw std::invalid_argument("unknown wallpaper group: " + g);
}

}  // namespace

const std::vector<std::string>& wallpaper_groups() {
    static const std::vector<std::string> groups{"p1",  "p2",  "pm",  "pg", "cm",   "pmm",  "pmg", "pgg", "cmm",
                                                 "p4",  "p4m", "p4g", "p3", "p3m1", "p31m", "p6",  "p6m"};
    return groups;
}

std::vector<std::string> config_names() {
    std::vector<std::string> names{"apollonian", "square", "triangular", "hexagonal"};
    for (const auto& g : wallpaper_groups()) names.push_back("wallpaper:" + g);
    return names;
}

Configuration make_config(const std::string& name) {
    if (name == "apollonian") return apollonian();
    if (name == "square") return square();
    if (name == "triangular") return triangular();
    if (name == "hexagonal") return hexagonal();
    const std::string prefix = "wallpaper:";
    if (name.rfind(prefix, 0) == 0) return wallpaper(name.substr(prefix.size()));
    throw std::invalid_argument("unknown configuration: " + name);
}

}  // namespace cpack
