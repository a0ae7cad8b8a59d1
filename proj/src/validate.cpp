#include "cpack/config.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <stdexcept>

namespace cpack {

namespace {

struct FloatCircle {
    double bt, b, h1, h2;
};

FloatCircle to_fc(const Circle& c) { return {c.co_curvature.f(), c.curvature.f(), c.h1.f(), c.h2.f()}; }

double product_f(const FloatCircle& v, const FloatCircle& w) {
    return v.h1 * w.h1 + v.h2 * w.h2 - 0.5 * (v.b * w.bt + v.bt * w.b);
}

// rounding budget for product_f
double product_tol(const FloatCircle& v, const FloatCircle& w) {
    double mag = std::fabs(v.h1 * w.h1) + std::fabs(v.h2 * w.h2) + std::fabs(v.b * w.bt) + std::fabs(v.bt * w.b);
    return 1e-7 * (1.0 + mag);
}

std::vector<FloatCircle> float_list(const std::vector<LabeledCircle>& cs) {
    std::vector<FloatCircle> out;
    out.reserve(cs.size());
    for (const auto& c : cs) out.push_back(to_fc(c.circle));
    return out;
}

// near(value) means the float product may equal value
bool near(const FloatCircle& v, const FloatCircle& w, double value) {
    return std::fabs(product_f(v, w) - value) <= product_tol(v, w);
}

bool externally_tangent(const LabeledCircle& v, const LabeledCircle& w, const FloatCircle& fv, const FloatCircle& fw) {
    return near(fv, fw, -1.0) && classify_pair(v.circle, w.circle) == PairClass::externally_tangent;
}

bool orthogonal(const LabeledCircle& v, const LabeledCircle& w, const FloatCircle& fv, const FloatCircle& fw) {
    return near(fv, fw, 0.0) && inversive_product(v.circle, w.circle).is_zero();
}

double angle_of(const FloatCircle& around, double x, double y) {
    return std::atan2(y - around.h2 / around.b, x - around.h1 / around.b);
}

}  // namespace

TangencyGraph tangency_graph(const std::vector<LabeledCircle>& circles, const Window& w) {
    TangencyGraph g;
    for (const auto& c : circles)
        if (meets(c.circle, w)) g.vertices.push_back(c);
    size_t n = g.vertices.size();
    auto fc = float_list(g.vertices);
    g.adjacency.assign(n, {});
    for (size_t i = 0; i < n; ++i)
        for (size_t j = i + 1; j < n; ++j)
            if (externally_tangent(g.vertices[i], g.vertices[j], fc[i], fc[j])) {
                g.edges.emplace_back(static_cast<int>(i), static_cast<int>(j));
                g.adjacency[i].push_back(static_cast<int>(j));
                g.adjacency[j].push_back(static_cast<int>(i));
            }
    // rotation system: counterclockwise order of tangency points around each
    // center, reversed for circles whose interior is unbounded
    for (size_t i = 0; i < n; ++i) {
        const FloatCircle& c = fc[i];
        if (c.b == 0.0) continue;
        std::vector<std::pair<double, int>> keyed;
        for (int j : g.adjacency[i]) {
            double s = c.b + fc[j].b;
            double a = angle_of(c, (c.h1 + fc[j].h1) / s, (c.h2 + fc[j].h2) / s);
            keyed.emplace_back(c.b < 0 ? -a : a, j);
        }
        std::sort(keyed.begin(), keyed.end());
        for (size_t k = 0; k < keyed.size(); ++k) g.adjacency[i][k] = keyed[k].second;
    }
    // trace faces: after arriving at v from u, leave along the neighbour preceding u
    std::vector<std::vector<char>> used(n);
    for (size_t i = 0; i < n; ++i) used[i].assign(g.adjacency[i].size(), 0);
    auto index_in = [&](int v, int u) {
        const auto& a = g.adjacency[v];
        return static_cast<size_t>(std::find(a.begin(), a.end(), u) - a.begin());
    };
    for (size_t s = 0; s < n; ++s)
        for (size_t k = 0; k < g.adjacency[s].size(); ++k) {
            if (used[s][k]) continue;
            std::vector<int> face;
            int u = static_cast<int>(s);
            size_t ku = k;
            while (!used[u][ku]) {
                used[u][ku] = 1;
                face.push_back(u);
                int v = g.adjacency[u][ku];
                size_t deg = g.adjacency[v].size();
                size_t back = index_in(v, u);
                ku = (back + deg - 1) % deg;
                u = v;
            }
            g.faces.push_back(face);
        }
    return g;
}

std::vector<std::string> ring_of(const LabeledCircle& c, const std::vector<LabeledCircle>& others) {
    if (c.circle.is_line()) return {};
    FloatCircle fc = to_fc(c.circle);
    std::vector<std::pair<double, size_t>> ring;
    for (size_t i = 0; i < others.size(); ++i) {
        FloatCircle fo = to_fc(others[i].circle);
        if (!orthogonal(c, others[i], fc, fo)) continue;
        if (fo.b == 0.0) return {};
        ring.emplace_back(angle_of(fc, fo.h1 / fo.b, fo.h2 / fo.b), i);
    }
    if (ring.size() < 3) return {};
    std::sort(ring.begin(), ring.end());
    std::vector<std::string> ids;
    for (size_t k = 0; k < ring.size(); ++k) {
        const auto& a = others[ring[k].second];
        const auto& b = others[ring[(k + 1) % ring.size()].second];
        if (classify_pair(a.circle, b.circle) != PairClass::externally_tangent) return {};
        ids.push_back(a.id);
    }
    return ids;
}

bool ValidationReport::pass() const {
    return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.pass; });
}

const CheckResult* ValidationReport::find(const std::string& name) const {
    for (const auto& c : checks)
        if (c.name == name) return &c;
    return nullptr;
}

Window safe_interior(const Configuration& c, const Window& w) {
    if (!c.lattice) return w;
    const auto& L = *c.lattice;
    double d1 = std::hypot(L[0].x.f() + L[1].x.f(), L[0].y.f() + L[1].y.f());
    double d2 = std::hypot(L[0].x.f() - L[1].x.f(), L[0].y.f() - L[1].y.f());
    Scalar m(static_cast<long long>(std::ceil(std::max(d1, d2) - 1e-9)));
    return w.expanded(-m);
}

namespace {

constexpr size_t witness_cap = 20;

void fail(CheckResult& r, const std::string& witness) {
    r.pass = false;
    if (r.witnesses.size() < witness_cap) r.witnesses.push_back(witness);
}

CheckResult check_pairs(const std::vector<LabeledCircle>& cs) {
    CheckResult r{"pairs", true, {}, ""};
    auto fc = float_list(cs);
    size_t exact_tests = 0;
    for (size_t i = 0; i < cs.size(); ++i)
        for (size_t j = i + 1; j < cs.size(); ++j) {
            double p = product_f(fc[i], fc[j]);
            // clearly disjoint exteriors: allowed for every kind pairing
            if (p < -1.0 - product_tol(fc[i], fc[j])) continue;
            ++exact_tests;
            PairClass pc = classify_pair(cs[i].circle, cs[j].circle);
            bool ok = pc == PairClass::externally_tangent || pc == PairClass::disjoint_exteriors;
            if (cs[i].kind != cs[j].kind && pc == PairClass::orthogonal) ok = true;
            if (!ok) fail(r, cs[i].id + " " + cs[j].id + " " + to_string(pc));
        }
    r.detail = std::to_string(cs.size()) + " circles, " + std::to_string(exact_tests) + " exact pair tests";
    return r;
}

CheckResult check_ringed(const std::string& name, const std::vector<LabeledCircle>& centers,
                         const std::vector<LabeledCircle>& others, const Window& w, bool finite) {
    CheckResult r{name, true, {}, ""};
    size_t tested = 0;
    for (const auto& c : centers) {
        if (!finite && !inside_window(c.circle, w)) continue;
        ++tested;
        if (ring_of(c, others).empty()) fail(r, c.id);
    }
    r.detail = std::to_string(tested) + " circles tested";
    return r;
}

// b |p|^2 - 2 h.p + b~ <= 0 exactly when p lies in the closed interior
Scalar interior_value(const Circle& c, const Scalar& x, const Scalar& y) {
    return c.curvature * (x * x + y * y) - Scalar(2) * (c.h1 * x + c.h2 * y) + c.co_curvature;
}

CheckResult check_coverage(const std::vector<LabeledCircle>& cs, const Window& w) {
    CheckResult r{"coverage", true, {}, ""};
    const int n = 24;
    auto fc = float_list(cs);
    Scalar dx = (w.xmax - w.xmin) / Scalar(n), dy = (w.ymax - w.ymin) / Scalar(n);
    Scalar half = Scalar(QuadExt::rational(1, 2));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            Scalar x = w.xmin + (Scalar(i) + half) * dx, y = w.ymin + (Scalar(j) + half) * dy;
            double xf = x.f(), yf = y.f();
            bool covered = false;
            std::vector<size_t> unsure;
            for (size_t k = 0; k < cs.size() && !covered; ++k) {
                const FloatCircle& c = fc[k];
                double v = c.b * (xf * xf + yf * yf) - 2 * (c.h1 * xf + c.h2 * yf) + c.bt;
                double tol = 1e-7 * (1 + std::fabs(c.b) * (xf * xf + yf * yf) + std::fabs(c.bt) +
                                     2 * (std::fabs(c.h1 * xf) + std::fabs(c.h2 * yf)));
                if (v < -tol) covered = true;
                else if (v <= tol) unsure.push_back(k);
            }
            for (size_t k : unsure)
                if (!covered && interior_value(cs[k].circle, x, y).sign() <= 0) covered = true;
            if (!covered) fail(r, "point (" + x.str() + ", " + y.str() + ")");
        }
    r.detail = std::to_string(n * n) + " sample points";
    return r;
}

std::string face_str(const TangencyGraph& g, const std::vector<int>& face) {
    std::string s = "face";
    for (int v : face) s += " " + g.vertices[v].id;
    return s;
}

// every complete face of the base tangency graph hosts exactly one dual
// orthogonal to its boundary circles, and every dual ringed by complete
// base circles sits in such a face
CheckResult check_faces(const std::string& name, const TangencyGraph& gb, const std::vector<LabeledCircle>& duals,
                        const Window& w, bool finite) {
    CheckResult r{name, true, {}, ""};
    auto fb = float_list(gb.vertices);
    auto fd = float_list(duals);
    auto complete = [&](int v) { return finite || inside_window(gb.vertices[v].circle, w); };
    std::set<std::vector<std::string>> face_sets;
    size_t tested = 0;
    for (const auto& face : gb.faces) {
        if (!std::all_of(face.begin(), face.end(), complete)) continue;
        std::vector<std::string> ids;
        for (int v : face) ids.push_back(gb.vertices[v].id);
        std::sort(ids.begin(), ids.end());
        face_sets.insert(ids);
        ++tested;
        int hits = 0;
        std::string hit;
        for (size_t k = 0; k < duals.size(); ++k) {
            bool all = true;
            for (int v : face)
                if (!orthogonal(gb.vertices[v], duals[k], fb[v], fd[k])) {
                    all = false;
                    break;
                }
            if (all) {
                ++hits;
                hit = duals[k].id;
            }
        }
        if (hits != 1) fail(r, face_str(gb, face) + " hosts " + std::to_string(hits) + " duals");
    }
    size_t duals_tested = 0;
    for (size_t k = 0; k < duals.size(); ++k) {
        std::vector<std::string> ids;
        bool all_complete = true;
        for (size_t v = 0; v < gb.vertices.size(); ++v)
            if (orthogonal(gb.vertices[v], duals[k], fb[v], fd[k])) {
                ids.push_back(gb.vertices[v].id);
                if (!complete(static_cast<int>(v))) all_complete = false;
            }
        if (!all_complete || ids.empty()) continue;
        ++duals_tested;
        std::sort(ids.begin(), ids.end());
        if (!face_sets.count(ids)) fail(r, duals[k].id + " matches no face");
    }
    r.detail = std::to_string(tested) + " faces, " + std::to_string(duals_tested) + " duals";
    return r;
}

// articulation points of the graph restricted to alive vertices
std::vector<int> articulation_points(const std::vector<std::vector<int>>& adj, const std::vector<char>& alive) {
    size_t n = adj.size();
    std::vector<int> disc(n, -1), low(n, 0), parent(n, -1);
    std::vector<size_t> it(n, 0);
    std::vector<char> art(n, 0);
    int timer = 0;
    for (size_t root = 0; root < n; ++root) {
        if (!alive[root] || disc[root] >= 0) continue;
        int children = 0;
        std::vector<int> stack{static_cast<int>(root)};
        disc[root] = low[root] = timer++;
        while (!stack.empty()) {
            int v = stack.back();
            if (it[v] < adj[v].size()) {
                int u = adj[v][it[v]++];
                if (!alive[u]) continue;
                if (disc[u] < 0) {
                    parent[u] = v;
                    disc[u] = low[u] = timer++;
                    if (v == static_cast<int>(root)) ++children;
                    stack.push_back(u);
                } else if (u != parent[v]) {
                    low[v] = std::min(low[v], disc[u]);
                }
            } else {
                stack.pop_back();
                int p = parent[v];
                if (p >= 0) {
                    low[p] = std::min(low[p], low[v]);
                    if (p != static_cast<int>(root) && low[v] >= disc[p]) art[p] = 1;
                }
            }
        }
        if (children > 1) art[root] = 1;
    }
    std::vector<int> out;
    for (size_t v = 0; v < n; ++v)
        if (art[v]) out.push_back(static_cast<int>(v));
    return out;
}

// all interior vertices still reachable from one another among alive vertices
bool interior_connected(const std::vector<std::vector<int>>& adj, const std::vector<char>& alive,
                        const std::vector<int>& interior) {
    int start = -1;
    for (int v : interior)
        if (alive[v]) {
            start = v;
            break;
        }
    if (start < 0) return true;
    std::vector<char> seen(adj.size(), 0);
    std::vector<int> queue{start};
    seen[start] = 1;
    for (size_t k = 0; k < queue.size(); ++k)
        for (int u : adj[queue[k]])
            if (alive[u] && !seen[u]) {
                seen[u] = 1;
                queue.push_back(u);
            }
    for (int v : interior)
        if (alive[v] && !seen[v]) return false;
    return true;
}

CheckResult check_three_connected(const TangencyGraph& g, const Window& safe, bool finite) {
    CheckResult r{"3-connected", true, {}, ""};
    size_t n = g.vertices.size();
    std::vector<int> interior;
    for (size_t v = 0; v < n; ++v)
        if (finite || (safe.valid() && inside_window(g.vertices[v].circle, safe))) interior.push_back(static_cast<int>(v));
    std::vector<char> alive(n, 1);
    if (!interior_connected(g.adjacency, alive, interior)) fail(r, "interior vertices disconnected");
    for (int u : interior) {
        alive[u] = 0;
        if (!interior_connected(g.adjacency, alive, interior)) fail(r, "cut vertex " + g.vertices[u].id);
        for (int a : articulation_points(g.adjacency, alive)) {
            alive[a] = 0;
            if (!interior_connected(g.adjacency, alive, interior))
                fail(r, "separating pair " + g.vertices[u].id + " " + g.vertices[a].id);
            alive[a] = 1;
        }
        alive[u] = 1;
    }
    r.detail = std::to_string(interior.size()) + " interior vertices of " + std::to_string(n);
    return r;
}

CheckResult growth_statistic(const Configuration& c, const Window& w) {
    CheckResult r{"growth", true, {}, ""};
    Scalar cx = (w.xmin + w.xmax) / Scalar(2), cy = (w.ymin + w.ymax) / Scalar(2);
    std::string d;
    for (int k : {4, 2, 1}) {
        Scalar hx = (w.xmax - w.xmin) / Scalar(2 * k), hy = (w.ymax - w.ymin) / Scalar(2 * k);
        Window sub{cx - hx, cx + hx, cy - hy, cy + hy};
        size_t count = c.circles(CircleKind::base, sub).size() + c.circles(CircleKind::dual, sub).size();
        d += (d.empty() ? "" : " ") + std::string("1/") + std::to_string(k) + ":" + std::to_string(count);
    }
    r.detail = "circles per nested window " + d;
    return r;
}

}  // namespace

ValidationReport validate_base_dual(const Configuration& c, const Window& w) {
    ValidationReport rep;
    bool finite = !c.periodic();
    auto base = c.circles(CircleKind::base, w);
    auto dual = c.circles(CircleKind::dual, w);
    std::vector<LabeledCircle> all = base;
    all.insert(all.end(), dual.begin(), dual.end());
    rep.checks.push_back(check_pairs(all));
    rep.checks.push_back(check_ringed("ringed-base", base, dual, w, finite));
    rep.checks.push_back(check_ringed("ringed-dual", dual, base, w, finite));
    rep.checks.push_back(check_coverage(all, w));
    rep.checks.push_back(check_faces("incidence", tangency_graph(base, w), dual, w, finite));
    rep.checks.push_back(growth_statistic(c, w));
    return rep;
}

ValidationReport check_duality(const Configuration& c, const Window& w) {
    ValidationReport rep;
    bool finite = !c.periodic();
    auto base = c.circles(CircleKind::base, w);
    auto dual = c.circles(CircleKind::dual, w);
    TangencyGraph gb = tangency_graph(base, w);
    rep.checks.push_back(check_faces("faces", gb, dual, w, finite));
    if (base.empty()) {
        rep.checks.push_back({"nonempty", false, {"no base circles in " + w.str()}, ""});
    }
    if (dual.empty()) {
        rep.checks.push_back({"nonempty", false, {"no dual circles in " + w.str()}, ""});
    }
    // separations caused by truncation stay within a few circle diameters of the boundary
    double diameter = 0;
    for (const Circle& b : c.base)
        if (!b.is_line()) diameter = std::max(diameter, 2 * b.radius_f());
    Window inner = w.expanded(-Scalar(static_cast<long long>(std::ceil(2 * diameter))));
    rep.checks.push_back(check_three_connected(gb, inner, finite));
    return rep;
}

std::vector<Circle> derive_dual_motif(const std::vector<Circle>& base, const std::array<Point, 2>& L) {
    Configuration tmp;
    tmp.base = base;
    tmp.lattice = L;
    Scalar m(static_cast<long long>(std::ceil(std::hypot(L[0].x.f(), L[0].y.f()) + std::hypot(L[1].x.f(), L[1].y.f()))));
    Scalar xs[4] = {Scalar(0), L[0].x, L[1].x, L[0].x + L[1].x};
    Scalar ys[4] = {Scalar(0), L[0].y, L[1].y, L[0].y + L[1].y};
    Window w{*std::min_element(xs, xs + 4) - m, *std::max_element(xs, xs + 4) + m,
             *std::min_element(ys, ys + 4) - m, *std::max_element(ys, ys + 4) + m};
    TangencyGraph g = tangency_graph(tmp.circles(CircleKind::base, w), w);
    std::vector<Circle> out;
    for (const auto& face : g.faces) {
        if (face.size() < 3) continue;
        bool complete = std::all_of(face.begin(), face.end(),
                                    [&](int v) { return inside_window(g.vertices[v].circle, w); });
        if (!complete) continue;
        auto tp = [&](size_t k) {
            return tangency_point(g.vertices[face[k]].circle, g.vertices[face[(k + 1) % face.size()]].circle);
        };
        Circle d = reduce_mod_lattice(circle_through(tp(0), tp(1), tp(2)), L);
        if (std::none_of(out.begin(), out.end(), [&](const Circle& o) { return o.same(d); })) out.push_back(d);
    }
    std::sort(out.begin(), out.end(), [&](const Circle& a, const Circle& b) {
        auto [sa, ta] = lattice_coords(L, a.center());
        auto [sb, tb] = lattice_coords(L, b.center());
        if (sa != sb) return sa < sb;
        if (ta != tb) return ta < tb;
        return a.curvature < b.curvature;
    });
    return out;
}

}  // namespace cpack
