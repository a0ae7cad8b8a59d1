#include "cpack/arithmetic.hpp"
#include "cpack/json_io.hpp"
#include "cpack/render.hpp"
#include "cpack/symmetry.hpp"
#include "oracles.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

using namespace cpack;

namespace {

// pinned tolerances and sizes
constexpr double float_tol = 1e-9;
constexpr int random_float_pairs = 1000;
constexpr int random_exact_pairs = 200;
constexpr int free_word_length = 5;
constexpr int geometry_height = 4;
constexpr int oracle_height = 3;
constexpr long long geometry_half_width = 8;
constexpr long long oracle_pad = 6;
constexpr int relation_word_length = 4;
constexpr long long relation_half_width = 6;
constexpr int interleavings = 100;
constexpr int probes = 20;
constexpr int density_max_height = 6;
constexpr double density_threshold = 0.8;
constexpr int density_samples = 20000;
// square packing circles of height k have curvature at least (2k+1)^2, so these
// radii keep every height up to the tested one
constexpr long long integrality_inverse_radius = 200;
constexpr long long density_inverse_radius = 400;
constexpr uint64_t seed = 20240601;

Scalar q(long long n, long long d = 1) { return Scalar(QuadExt::rational(n, d)); }
Window box(long long h) { return {Scalar(-h), Scalar(h), Scalar(-h), Scalar(h)}; }

Packing make_packing(const std::string& name, Mode mode, int h, const Window& w, int threads = 1,
                     const Scalar& min_radius = q(1, 100)) {
    Limits lim;
    lim.max_height = h;
    lim.window = w;
    lim.min_radius = min_radius;
    return generate(make_config(name), mode, lim, threads);
}

struct Outcome {
    bool pass = true;
    std::string detail;
    std::vector<std::string> notes;
    void require(bool ok, const std::string& what) {
        if (!ok) {
            pass = false;
            if (notes.size() < 5) notes.push_back(what);
        }
    }
};

bool geo_close(const GeoCircle& a, const GeoCircle& b, double tol) {
    if (a.is_line != b.is_line) return false;
    auto rel = [&](double x, double y) { return std::fabs(x - y) <= tol * std::max(1.0, std::max(std::fabs(x), std::fabs(y))); };
    if (a.is_line) {
        double s = (a.normal.x.f() * b.normal.x.f() + a.normal.y.f() * b.normal.y.f()) < 0 ? -1 : 1;
        return rel(a.normal.x.f(), s * b.normal.x.f()) && rel(a.normal.y.f(), s * b.normal.y.f()) &&
               rel(a.offset.f(), s * b.offset.f());
    }
    return rel(a.center.x.f(), b.center.x.f()) && rel(a.center.y.f(), b.center.y.f()) &&
           rel(a.radius.f(), b.radius.f());
}

Outcome criterion_1() {
    Outcome o;
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> pos(-5, 5), rad(0.1, 3);
    int float_ok = 0;
    for (int i = 0; i < random_float_pairs; ++i) {
        GeoCircle m{false, {Scalar::real(pos(rng)), Scalar::real(pos(rng))}, Scalar::real(rad(rng)), {}, {}};
        GeoCircle v{false, {Scalar::real(pos(rng)), Scalar::real(pos(rng))}, Scalar::real(rad(rng)), {}, {}};
        double dx = m.center.x.f() - v.center.x.f(), dy = m.center.y.f() - v.center.y.f();
        // keep v clear of the mirror center so the image stays a circle of moderate size
        if (std::fabs(std::hypot(dx, dy) - v.radius.f()) < 0.05) {
            --i;
            continue;
        }
        Circle mi = from_center_radius(m.center, m.radius), vi = from_center_radius(v.center, v.radius);
        GeoCircle a = to_geometric(reflect(mi, vi)), b = reflect_geometric(m, v);
        if (geo_close(a, b, float_tol)) ++float_ok;
        else o.require(false, "float pair " + std::to_string(i));
    }
    std::uniform_int_distribution<int> num(-40, 40), den(1, 9);
    int exact_ok = 0;
    for (int i = 0; i < random_exact_pairs; ++i) {
        auto rnd = [&] { return q(num(rng), den(rng)); };
        auto rr = [&] { return q(std::abs(num(rng)) % 9 + 1, den(rng)); };
        GeoCircle m, v;
        if (i % 10 == 0) {
            // line mirrors along the axes
            m.is_line = true;
            m.normal = i % 20 == 0 ? Point{Scalar(1), Scalar(0)} : Point{Scalar(0), Scalar(-1)};
            m.offset = rnd();
        } else {
            m = {false, {rnd(), rnd()}, rr(), {}, {}};
        }
        v = {false, {rnd(), rnd()}, rr(), {}, {}};
        Circle mi = m.is_line ? from_line(m.normal, m.offset) : from_center_radius(m.center, m.radius);
        Circle vi = from_center_radius(v.center, v.radius);
        if (!m.is_line) {
            Scalar dx = m.center.x - v.center.x, dy = m.center.y - v.center.y;
            if ((dx * dx + dy * dy - v.radius * v.radius).is_zero()) {
                --i;
                continue;
            }
        }
        if (same_geometric(to_geometric(reflect(mi, vi)), reflect_geometric(m, v))) ++exact_ok;
        else o.require(false, "exact pair " + std::to_string(i));
    }
    o.detail = std::to_string(float_ok) + "/" + std::to_string(random_float_pairs) + " float within " +
               std::to_string(float_tol) + ", " + std::to_string(exact_ok) + "/" + std::to_string(random_exact_pairs) +
               " exact identical";
    return o;
}

Outcome criterion_2() {
    Outcome o;
    size_t checked = 0;
    for (const std::string name : {"square", "triangular"}) {
        Configuration cfg = make_config(name);
        Packing p = make_packing(name, Mode::packing, geometry_height, box(geometry_half_width));
        auto duals = cfg.circles(CircleKind::dual, box(4));
        for (size_t i = 0; i < p.circles.size(); ++i) {
            const Circle& v = p.circles[i].circle;
            const Circle& w = p.circles[(i + 1) % p.circles.size()].circle;
            const Circle& m = duals[i % duals.size()].circle;
            Circle rv = reflect(m, v), rw = reflect(m, w);
            bool ok = v.quadric_defect().q().is_zero() && rv.quadric_defect().q().is_zero() &&
                      (inversive_product(rv, rw) - inversive_product(v, w)).q().is_zero();
            o.require(ok, name + " circle " + v.str());
            ++checked;
        }
    }
    o.detail = std::to_string(checked) + " circles, quadric and product deviation exactly 0";
    return o;
}

Point invert_point(const Circle& m, const Point& p) {
    Point c = m.center();
    Scalar r = m.radius();
    Scalar dx = p.x - c.x, dy = p.y - c.y;
    Scalar s = r * r / (dx * dx + dy * dy);
    return {c.x + s * dx, c.y + s * dy};
}

Outcome criterion_3() {
    Outcome o;
    std::mt19937_64 rng(seed + 3);
    std::uniform_int_distribution<int> num(-30, 30), den(1, 7);
    Configuration cfg = make_config("square");
    auto duals = cfg.circles(CircleKind::dual, box(4));
    size_t involutions = 0;
    for (int i = 0; i < 500; ++i) {
        const Circle& m = duals[i % duals.size()].circle;
        Circle v = from_center_radius({q(num(rng), den(rng)), q(num(rng), den(rng))}, q(std::abs(num(rng)) + 1, den(rng)));
        Circle back = reflect(m, reflect(m, v));
        o.require(back.co_curvature.same(v.co_curvature) && back.curvature.same(v.curvature) && back.h1.same(v.h1) &&
                      back.h2.same(v.h2),
                  "involution " + v.str());
        ++involutions;
    }
    // four duals around the origin; the origin lies outside all of them
    std::vector<Circle> gens;
    for (auto [x, y] : std::vector<std::pair<int, int>>{{1, 1}, {-1, 1}, {-1, -1}, {1, -1}})
        gens.push_back(from_center_radius({Scalar(x), Scalar(y)}, Scalar(1)));
    Point p{Scalar(0), Scalar(0)};
    size_t words = 0;
    std::function<void(std::vector<int>&)> walk = [&](std::vector<int>& word) {
        if (!word.empty()) {
            Point x = p;
            for (auto it = word.rbegin(); it != word.rend(); ++it) x = invert_point(gens[*it], x);
            o.require(!(x.x == p.x && x.y == p.y), "word fixes the witness point");
            ++words;
        }
        if (static_cast<int>(word.size()) == free_word_length) return;
        for (int g = 0; g < 4; ++g) {
            if (!word.empty() && word.back() == g) continue;
            word.push_back(g);
            walk(word);
            word.pop_back();
        }
    };
    std::vector<int> w;
    walk(w);
    o.detail = std::to_string(involutions) + " involutions exact, " + std::to_string(words) +
               " reduced words of length <= " + std::to_string(free_word_length) + " move the witness point";
    return o;
}

// all pairs via an x-sweep over bounding boxes; pairs with disjoint boxes are
// disjoint disks, the rest are classified exactly
size_t check_pairs(const std::vector<Circle>& cs, Outcome& o, const std::string& name) {
    struct Box {
        double x0, x1, y0, y1;
        size_t i;
    };
    std::vector<Box> boxes;
    std::vector<size_t> unbounded;
    for (size_t i = 0; i < cs.size(); ++i) {
        if (cs[i].curvature.sign() <= 0) {
            unbounded.push_back(i);
            continue;
        }
        oracle::Disk d = oracle::disk_of(cs[i]);
        double pad = 1e-9 * (1 + std::fabs(d.x) + std::fabs(d.y));
        boxes.push_back({d.x - d.r - pad, d.x + d.r + pad, d.y - d.r - pad, d.y + d.r + pad, i});
    }
    std::sort(boxes.begin(), boxes.end(), [](const Box& a, const Box& b) { return a.x0 < b.x0; });
    size_t exact = 0;
    auto test = [&](size_t i, size_t j) {
        ++exact;
        PairClass pc = classify_pair(cs[i], cs[j]);
        o.require(pc == PairClass::externally_tangent || pc == PairClass::disjoint_exteriors,
                  name + ": " + cs[i].str() + " " + cs[j].str() + " " + to_string(pc));
    };
    std::vector<const Box*> active;
    for (const Box& b : boxes) {
        active.erase(std::remove_if(active.begin(), active.end(), [&](const Box* a) { return a->x1 < b.x0; }),
                     active.end());
        for (const Box* a : active)
            if (a->y0 <= b.y1 && b.y0 <= a->y1) test(a->i, b.i);
        active.push_back(&b);
    }
    for (size_t u : unbounded)
        for (size_t j = 0; j < cs.size(); ++j)
            if (j != u && (cs[j].curvature.sign() > 0 || j > u)) test(u, j);
    return exact;
}

Outcome criterion_4() {
    Outcome o;
    std::ostringstream detail;
    for (const std::string name : {"square", "triangular", "hexagonal", "apollonian"}) {
        Configuration cfg = make_config(name);
        Window w = box(geometry_half_width);
        Packing p = make_packing(name, Mode::packing, geometry_height, w);
        std::vector<Circle> cs;
        for (const auto& pc : p.circles) cs.push_back(pc.circle);
        size_t exact = check_pairs(cs, o, name);

        // every circle of positive height lies in exactly one dual
        double rmax = 0;
        for (const Circle& d : cfg.dual)
            if (!d.is_line()) rmax = std::max(rmax, d.radius_f());
        size_t nested = 0;
        for (const auto& pc : p.circles) {
            if (pc.height == 0) continue;
            oracle::Disk d = oracle::disk_of(pc.circle);
            long long pad = static_cast<long long>(std::ceil(2 * rmax)) + 1;
            Window around{Scalar(static_cast<long long>(std::floor(d.x - d.r)) - pad),
                          Scalar(static_cast<long long>(std::ceil(d.x + d.r)) + pad),
                          Scalar(static_cast<long long>(std::floor(d.y - d.r)) - pad),
                          Scalar(static_cast<long long>(std::ceil(d.y + d.r)) + pad)};
            int count = 0;
            for (const auto& dual : cfg.circles(CircleKind::dual, around))
                if (inside(pc.circle, dual.circle)) ++count;
            o.require(count == 1, name + ": " + pc.circle.str() + " inside " + std::to_string(count) + " duals");
            ++nested;
        }

        // minimal word lengths from an independent floating-point search
        Window wide = w.expanded(Scalar(oracle_pad));
        std::vector<oracle::Disk> base, duals;
        for (const auto& l : cfg.circles(CircleKind::base, wide)) base.push_back(oracle::disk_of(l.circle));
        for (const auto& l : cfg.circles(CircleKind::dual, wide)) duals.push_back(oracle::disk_of(l.circle));
        auto lengths = oracle::word_length_bfs(base, duals, oracle_height, p.limits.min_radius.f() / 8);
        size_t compared = 0;
        for (const auto& pc : p.circles) {
            if (pc.height > oracle_height) continue;
            int* len = lengths.find(oracle::disk_of(pc.circle));
            o.require(len && *len == pc.height, name + ": height " + std::to_string(pc.height) + " vs oracle " +
                                                   (len ? std::to_string(*len) : std::string("missing")) + " for " +
                                                   pc.circle.str());
            ++compared;
        }
        detail << name << " " << cs.size() << " circles/" << exact << " exact pair tests/" << nested << " nested/"
               << compared << " heights; ";
    }
    o.detail = detail.str();
    return o;
}

Outcome criterion_5() {
    Outcome o;
    std::ostringstream detail;
    Window w = box(geometry_half_width);
    IntegralityReport sq = integrality_report(make_packing("square", Mode::packing, 5, w, 1, q(1, integrality_inverse_radius)));
    o.require(sq.pass(), "square packing has non-integral curvatures");
    detail << "square H=5 " << sq.integral << "/" << sq.total << " integral; ";

    IntegralityReport sup = integrality_report(make_packing("square", Mode::super, 3, w));
    o.require(sup.coordinate_integral == sup.total, "square superpacking has non-integral coordinates");
    detail << "square super H=3 " << sup.coordinate_integral << "/" << sup.total << " in Z^4; ";

    Packing tri = make_packing("triangular", Mode::packing, 4, w);
    size_t base_orbit = 0, members = 0;
    for (const auto& pc : tri.circles) {
        if (pc.kind != "base") continue;
        ++base_orbit;
        if (lattice_membership(LatticeKind::triangular_base, pc.circle)) ++members;
    }
    o.require(base_orbit > 0 && members == base_orbit, "triangular base orbit leaves the lattice set");
    detail << "triangular H=4 " << members << "/" << base_orbit << " lattice members; ";

    IntegralityReport hex = integrality_report(make_packing("hexagonal", Mode::packing, 4, w));
    o.require(hex.pass(), "hexagonal packing has non-integral curvatures");
    detail << "hexagonal H=4 " << hex.integral << "/" << hex.total << " integral";
    o.detail = detail.str();
    return o;
}

Outcome criterion_6() {
    Outcome o;
    std::ostringstream detail;
    Window w = box(relation_half_width);
    for (const auto& rel : builtin_relations()) {
        Configuration cfg = make_config(rel.config);
        RelationReport r = verify_relation_all_words(cfg, rel, rel.instance, relation_word_length, w);
        o.require(r.pass() && r.max_residual.is_zero(), rel.name + " has a nonzero residual");
        detail << rel.name << " " << r.words_checked << " words; ";
    }
    // the quadratic square instance reflected in the dual at (1,1)
    Circle m = from_center_radius({Scalar(1), Scalar(1)}, Scalar(1));
    auto image = [&](const CurvatureRelation& rel) {
        std::vector<Scalar> b;
        for (const Circle& c : rel.instance) b.push_back(reflect(m, c).curvature);
        return b;
    };
    std::vector<Scalar> quad = image(builtin_relation("square-quadratic"));
    std::vector<Scalar> want{Scalar(9), Scalar(1), Scalar(9), Scalar(9)};
    Scalar lhs = (quad[0] - Scalar(3) * quad[1]) * (quad[0] - Scalar(3) * quad[1]) +
                 (quad[3] - Scalar(3) * quad[2]) * (quad[3] - Scalar(3) * quad[2]);
    Scalar rhs = Scalar(2) * (quad[0] + quad[1]) * (quad[2] + quad[3]);
    o.require(quad == want && lhs == Scalar(360) && rhs == Scalar(360), "(9,1,9,9) instance");
    std::vector<Scalar> plus = image(builtin_relation("square-linear-plus"));
    std::vector<Scalar> want_plus{Scalar(9), Scalar(1), Scalar(1), Scalar(9)};
    o.require(plus == want_plus && (plus[0] + plus[2] - plus[1] - plus[3]).is_zero(), "plus-shape (9,1,1,9)");
    detail << "(9,1,9,9): " << lhs.str() << " = " << rhs.str() << "; plus-shape (9,1,1,9) reproduced";
    o.detail = detail.str();
    return o;
}

Outcome criterion_7() {
    Outcome o;
    Configuration cfg = make_config("square");
    std::vector<std::string> duals;
    for (const auto& l : cfg.circles(CircleKind::dual, box(5))) duals.push_back(l.id);
    std::vector<Isometry> gens;
    for (const auto& g : cfg.symmetries) {
        Isometry iso = g.isometry();
        if (!verify_isometry(cfg, iso)) {
            o.require(false, "declared generator fails verification");
            continue;
        }
        gens.push_back(iso);
        gens.push_back(iso.inverse());
    }
    std::mt19937_64 rng(seed + 7);
    std::uniform_int_distribution<int> num(-20, 20), den(1, 6), len(1, 10);
    std::vector<Circle> probe;
    for (int i = 0; i < probes; ++i)
        probe.push_back(from_center_radius({q(num(rng), den(rng)), q(num(rng), den(rng))}, q(std::abs(num(rng)) + 1, 7)));
    size_t comparisons = 0;
    for (int t = 0; t < interleavings; ++t) {
        std::vector<Letter> letters;
        int n = len(rng);
        for (int k = 0; k < n; ++k) {
            if (rng() % 2) letters.emplace_back(duals[rng() % duals.size()]);
            else letters.emplace_back(gens[rng() % gens.size()]);
        }
        NormalForm nf = normal_form(cfg, letters);
        for (const Circle& v : probe) {
            Circle direct = v;
            for (auto it = letters.rbegin(); it != letters.rend(); ++it) {
                if (std::holds_alternative<Isometry>(*it)) direct = apply_isometry(std::get<Isometry>(*it), direct);
                else direct = apply_word(cfg, {std::get<std::string>(*it)}, direct);
            }
            Circle via = apply_word(cfg, nf.word, apply_isometry(nf.isometry, v));
            o.require(via.co_curvature.same(direct.co_curvature) && via.curvature.same(direct.curvature) &&
                          via.h1.same(direct.h1) && via.h2.same(direct.h2),
                      "interleaving " + std::to_string(t));
            ++comparisons;
        }
    }
    o.detail = std::to_string(interleavings) + " interleavings x " + std::to_string(probes) + " probes, " +
               std::to_string(comparisons) + " exact comparisons";
    return o;
}

Outcome criterion_8() {
    Outcome o;
    size_t ok = 0;
    for (const auto& g : wallpaper_groups()) {
        Configuration c = make_config("wallpaper:" + g);
        bool valid = validate_base_dual(c, box(geometry_half_width)).pass();
        Classification k = classify_wallpaper(c);
        Discovery d = discover_symmetries(c);
        bool good = valid && k.failures.empty() && k.group == g && d.undeclared.empty();
        o.require(good, g + ": valid=" + std::to_string(valid) + " classified=" + k.group +
                            " undeclared=" + std::to_string(d.undeclared.size()));
        if (good) ++ok;
    }
    o.detail = std::to_string(ok) + "/" + std::to_string(wallpaper_groups().size()) +
               " constructors validate, classify to the declared group, no undeclared symmetry";
    return o;
}

Outcome criterion_9() {
    Outcome o;
    // the cell [-1,1]^2 is a full period of the square configuration
    std::mt19937_64 rng(seed + 9);
    std::uniform_real_distribution<double> u(-1, 1);
    std::vector<std::pair<double, double>> pts(density_samples);
    for (auto& p : pts) p = {u(rng), u(rng)};
    std::ostringstream detail;
    double prev = -1, last = 0;
    for (int h = 0; h <= density_max_height; ++h) {
        Packing p = make_packing("square", Mode::packing, h, box(2), 1, q(1, density_inverse_radius));
        std::vector<oracle::Disk> disks;
        for (const auto& pc : p.circles) disks.push_back(oracle::disk_of(pc.circle));
        oracle::CenterGrid grid(disks, 0.25);
        size_t covered = 0;
        for (auto [x, y] : pts) {
            bool in = false;
            // disks covering a cell point have radius at most 1
            grid.near(x, y, 1.0, [&](size_t k) {
                const auto& d = disks[k];
                if (!in && (x - d.x) * (x - d.x) + (y - d.y) * (y - d.y) <= d.r * d.r) in = true;
            });
            if (in) ++covered;
        }
        double frac = static_cast<double>(covered) / density_samples;
        o.require(frac >= prev, "density drops at height " + std::to_string(h));
        detail << "H" << h << "=" << frac << " ";
        prev = frac;
        last = frac;
    }
    o.require(last > density_threshold, "density at the top height is below the threshold");
    detail << "(threshold " << density_threshold << ")";
    o.detail = detail.str();
    return o;
}

Outcome criterion_10() {
    Outcome o;
    auto pipeline = [](int threads) {
        Packing p = make_packing("wallpaper:p4g", Mode::packing, 4, box(6), threads);
        return to_json(p) + to_svg(p);
    };
    std::string a = pipeline(1), b = pipeline(1), c = pipeline(4), d = pipeline(4);
    o.require(a == b, "two single-thread runs differ");
    o.require(a == c && c == d, "four-thread output differs");
    o.detail = std::to_string(a.size()) + " bytes identical across 2 runs x threads {1,4}";
    return o;
}

}  // namespace

int main() {
    std::vector<std::function<Outcome()>> criteria{criterion_1, criterion_2, criterion_3, criterion_4, criterion_5,
                                                   criterion_6, criterion_7, criterion_8, criterion_9, criterion_10};
    int failed = 0;
    for (size_t i = 0; i < criteria.size(); ++i) {
        auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = criteria[i]();
        } catch (const std::exception& e) {
            o.pass = false;
            o.notes.push_back(std::string("exception: ") + e.what());
        }
        double dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        std::printf("criterion %zu: %s (%.1fs) %s\n", i + 1, o.pass ? "PASS" : "FAIL", dt, o.detail.c_str());
        for (const auto& n : o.notes) std::printf("    %s\n", n.c_str());
        std::fflush(stdout);
        if (!o.pass) ++failed;
    }
    return failed == 0 ? 0 : 1;
}
