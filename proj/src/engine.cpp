#include "cpack/engine.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>
#include <thread>
#include <unordered_map>

namespace cpack {

std::string to_string(Mode m) {
    switch (m) {
        case Mode::packing: return "packing";
        case Mode::dual: return "dual";
        case Mode::super: return "super";
    }
    return "?";
}

Mode mode_from_string(const std::string& s) {
    if (s == "packing") return Mode::packing;
    if (s == "dual") return Mode::dual;
    if (s == "super") return Mode::super;
    throw std::invalid_argument("unknown mode: " + s);
}

Circle unoriented(const Circle& c) {
    int s = c.curvature.sign();
    if (s == 0) s = c.h1.sign();
    if (s == 0) s = c.h2.sign();
    return s < 0 ? -c : c;
}

namespace {

void check_letter(const Configuration& cfg, const std::string& id, Mode mode) {
    CircleKind k;
    try {
        k = cfg.kind_of_id(id);
        cfg.circle_by_id(id);
    } catch (const std::invalid_argument&) {
        throw std::invalid_argument("unknown generator id: " + id);
    }
    if (mode != Mode::super && k != CircleKind::dual)
        throw std::invalid_argument("generator " + id + " is not a dual circle");
}

}  // namespace

GroupWord reduce_word(const Configuration& cfg, const GroupWord& w, Mode mode) {
    for (const auto& id : w) check_letter(cfg, id, mode);
    GroupWord cur = w;
    std::map<std::pair<std::string, std::string>, bool> commute_cache;
    auto commute = [&](const std::string& a, const std::string& b) {
        if (cfg.kind_of_id(a) == cfg.kind_of_id(b)) return false;
        auto key = std::make_pair(a, b);
        auto it = commute_cache.find(key);
        if (it != commute_cache.end()) return it->second;
        bool r = inversive_product(cfg.circle_by_id(a), cfg.circle_by_id(b)).is_zero();
        commute_cache[key] = r;
        return r;
    };
    bool changed = true;
    while (changed) {
        changed = false;
        if (mode == Mode::super)
            for (size_t i = 0; i + 1 < cur.size(); ++i)
                if (cur[i + 1] < cur[i] && commute(cur[i], cur[i + 1])) {
                    std::swap(cur[i], cur[i + 1]);
                    changed = true;
                }
        GroupWord out;
        for (const auto& id : cur) {
            if (!out.empty() && out.back() == id) {
                out.pop_back();
                changed = true;
            } else {
                out.push_back(id);
            }
        }
        cur = std::move(out);
    }
    return cur;
}

Circle apply_word(const Configuration& cfg, const GroupWord& w, const Circle& v) {
    Circle r = v;
    for (auto it = w.rbegin(); it != w.rend(); ++it) {
        Circle m;
        try {
            m = cfg.circle_by_id(*it);
        } catch (const std::invalid_argument&) {
            throw std::invalid_argument("unknown generator id: " + *it);
        }
        r = reflect(m, r);
    }
    return r;
}

NormalForm normal_form(const Configuration& cfg, const std::vector<Letter>& letters) {
    // invariant: the processed suffix equals word * iso
    GroupWord word;
    Isometry iso = Isometry::identity();
    for (auto it = letters.rbegin(); it != letters.rend(); ++it) {
        if (const auto* id = std::get_if<std::string>(&*it)) {
            check_letter(cfg, *id, Mode::packing);
            word.insert(word.begin(), *id);
            continue;
        }
        const Isometry& g = std::get<Isometry>(*it);
        for (auto& id : word) {
            Circle image = apply_isometry(g, cfg.circle_by_id(id));
            auto found = cfg.locate(image, CircleKind::dual);
            if (!found) throw std::invalid_argument("isometry " + g.str() + " does not map mirror " + id + " to a dual circle");
            id = *found;
        }
        iso = compose(g, iso);
    }
    return {reduce_word(cfg, word), iso};
}

namespace {

struct FloatCircle {
    double bt, b, h1, h2;
};

FloatCircle to_fc(const Circle& c) { return {c.co_curvature.f(), c.curvature.f(), c.h1.f(), c.h2.f()}; }

double product_f(const FloatCircle& v, const FloatCircle& w) {
    return v.h1 * w.h1 + v.h2 * w.h2 - 0.5 * (v.b * w.bt + v.bt * w.b);
}

double product_tol(const FloatCircle& v, const FloatCircle& w) {
    double mag = std::fabs(v.h1 * w.h1) + std::fabs(v.h2 * w.h2) + std::fabs(v.b * w.bt) + std::fabs(v.bt * w.b);
    return 1e-7 * (1.0 + mag);
}

struct Node {
    Circle circle;
    FloatCircle f;
    int height;
    std::vector<int> word;  // generator indices, leftmost applied last
    int source;
};

struct Candidate {
    int parent;
    int gen;
    Circle circle;
};

// float screen: false only when the circle certainly misses the window
bool may_meet(const FloatCircle& c, const Window& w) {
    if (c.b == 0.0) return true;
    double cx = c.h1 / c.b, cy = c.h2 / c.b, r = 1.0 / std::fabs(c.b);
    double px = std::clamp(cx, w.xmin.f(), w.xmax.f()), py = std::clamp(cy, w.ymin.f(), w.ymax.f());
    return std::hypot(cx - px, cy - py) <= r + 1e-7 * (1 + r + std::fabs(cx) + std::fabs(cy));
}

size_t hash_circle(const Circle& c, bool exact) {
    size_t h = 0;
    for (const Scalar* s : {&c.co_curvature, &c.curvature, &c.h1, &c.h2}) {
        size_t v = exact ? s->q().hash() : std::hash<double>()(std::round(s->f() * 1e7));
        h ^= v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    }
    return h;
}

bool close_circles(const Circle& a, const Circle& b, bool exact) {
    if (exact) return a.same(b);
    auto near = [](double x, double y) { return std::fabs(x - y) <= 1e-9 * (1 + std::fabs(x) + std::fabs(y)); };
    return near(a.co_curvature.f(), b.co_curvature.f()) && near(a.curvature.f(), b.curvature.f()) &&
           near(a.h1.f(), b.h1.f()) && near(a.h2.f(), b.h2.f());
}

// compare by float first and fall back to exact arithmetic only for near ties
int compare_scalar(const Scalar& a, const Scalar& b) {
    double x = a.f(), y = b.f();
    if (std::fabs(x - y) > 1e-12 * (1 + std::fabs(x) + std::fabs(y))) return x < y ? -1 : 1;
    if (!a.exact() || !b.exact()) return 0;
    return compare(a, b);
}

int compare_float_first(double x, double y, const Scalar& a, const Scalar& b) {
    if (std::fabs(x - y) > 1e-12 * (1 + std::fabs(x) + std::fabs(y))) return x < y ? -1 : 1;
    if (!a.exact() || !b.exact()) return 0;
    return compare(a, b);
}

// canonical order: curvature, then center, then co-curvature
bool canonical_less(const Circle& a, const Circle& b) {
    if (int c = compare_scalar(a.curvature, b.curvature)) return c < 0;
    if (!a.is_line()) {
        double ax = a.center_x_f(), bx = b.center_x_f(), ay = a.center_y_f(), by = b.center_y_f();
        bool near_x = std::fabs(ax - bx) <= 1e-12 * (1 + std::fabs(ax) + std::fabs(bx));
        bool near_y = std::fabs(ay - by) <= 1e-12 * (1 + std::fabs(ay) + std::fabs(by));
        if (!near_x) return ax < bx;
        Point pa = a.center(), pb = b.center();
        if (int c = compare_float_first(ax, bx, pa.x, pb.x)) return c < 0;
        if (!near_y) return ay < by;
        if (int c = compare_float_first(ay, by, pa.y, pb.y)) return c < 0;
    } else {
        if (int c = compare_scalar(a.h1, b.h1)) return c < 0;
        if (int c = compare_scalar(a.h2, b.h2)) return c < 0;
    }
    return compare_scalar(a.co_curvature, b.co_curvature) < 0;
}

}  // namespace

Packing generate(const Configuration& cfg, Mode mode, const Limits& limits, int threads) {
    if (limits.max_height < 0) throw std::invalid_argument("max height must be nonnegative");
    if (limits.min_radius.sign() <= 0) throw std::invalid_argument("min radius must be positive");
    if (!limits.window.valid()) throw std::invalid_argument("invalid window " + limits.window.str());
    if (limits.margin.sign() < 0) throw std::invalid_argument("margin must be nonnegative");
    threads = std::max(1, threads);
    const bool exact = cfg.exact() && limits.min_radius.exact() && limits.window.xmin.exact();
    const Window work = limits.window.expanded(limits.margin);
    const Scalar max_curv = Scalar(1) / limits.min_radius;
    const double max_curv_f = max_curv.f();
    const bool oriented = mode == Mode::packing;

    std::vector<LabeledCircle> starts;
    if (mode != Mode::dual) starts = cfg.circles(CircleKind::base, work);
    if (mode != Mode::packing) {
        auto d = cfg.circles(CircleKind::dual, work);
        starts.insert(starts.end(), d.begin(), d.end());
    }
    std::vector<LabeledCircle> gens = cfg.circles(CircleKind::dual, work);
    if (mode == Mode::super) {
        auto b = cfg.circles(CircleKind::base, work);
        gens.insert(gens.begin(), b.begin(), b.end());
    }
    std::vector<FloatCircle> gf;
    for (const auto& g : gens) gf.push_back(to_fc(g.circle));

    std::vector<Node> nodes;
    std::unordered_map<size_t, std::vector<Circle>> seen;
    auto key_of = [&](const Circle& c) { return oriented ? c : unoriented(c); };
    auto insert_if_new = [&](const Circle& c) {
        Circle k = key_of(c);
        auto& bucket = seen[hash_circle(k, exact)];
        for (const Circle& o : bucket)
            if (close_circles(o, k, exact)) return false;
        bucket.push_back(std::move(k));
        return true;
    };
    auto sort_layer = [&](size_t from) {
        std::stable_sort(nodes.begin() + from, nodes.end(),
                         [](const Node& a, const Node& b) { return canonical_less(a.circle, b.circle); });
    };

    for (size_t i = 0; i < starts.size(); ++i)
        if (insert_if_new(starts[i].circle))
            nodes.push_back({starts[i].circle, to_fc(starts[i].circle), 0, {}, static_cast<int>(i)});
    sort_layer(0);

    size_t layer_begin = 0;
    for (int h = 0; h < limits.max_height; ++h) {
        size_t layer_end = nodes.size();
        if (layer_begin == layer_end) break;
        auto expand = [&](size_t lo, size_t hi, std::vector<Candidate>& out) {
            for (size_t p = lo; p < hi; ++p) {
                const Node& n = nodes[p];
                int last = n.word.empty() ? -1 : n.word.front();
                for (size_t j = 0; j < gens.size(); ++j) {
                    if (static_cast<int>(j) == last) continue;
                    double pr = product_f(n.f, gf[j]);
                    if (pr > -1.0 + product_tol(n.f, gf[j])) continue;
                    FloatCircle img{n.f.bt - 2 * pr * gf[j].bt, n.f.b - 2 * pr * gf[j].b, n.f.h1 - 2 * pr * gf[j].h1,
                                    n.f.h2 - 2 * pr * gf[j].h2};
                    if (std::fabs(img.b) > max_curv_f * (1 + 1e-9) + 1e-9) continue;
                    if (!may_meet(img, work)) continue;
                    Scalar pe = inversive_product(n.circle, gens[j].circle);
                    if (pe > Scalar(-1)) continue;
                    Circle c = reflect(gens[j].circle, n.circle);
                    if (c.curvature.abs() > max_curv) continue;
                    if (!meets(c, work)) continue;
                    out.push_back({static_cast<int>(p), static_cast<int>(j), std::move(c)});
                }
            }
        };
        size_t count = layer_end - layer_begin;
        size_t chunks = std::min<size_t>(static_cast<size_t>(threads), count);
        std::vector<std::vector<Candidate>> results(chunks);
        if (chunks <= 1) {
            expand(layer_begin, layer_end, results[0]);
        } else {
            std::vector<std::thread> pool;
            for (size_t t = 0; t < chunks; ++t) {
                size_t lo = layer_begin + count * t / chunks, hi = layer_begin + count * (t + 1) / chunks;
                pool.emplace_back(expand, lo, hi, std::ref(results[t]));
            }
            for (auto& th : pool) th.join();
        }
        for (auto& chunk : results)
            for (auto& cand : chunk) {
                if (!insert_if_new(cand.circle)) continue;
                const Node& parent = nodes[cand.parent];
                std::vector<int> word{cand.gen};
                word.insert(word.end(), parent.word.begin(), parent.word.end());
                FloatCircle f = to_fc(cand.circle);
                nodes.push_back({std::move(cand.circle), f, h + 1, std::move(word), parent.source});
            }
        layer_begin = layer_end;
        sort_layer(layer_end);
    }

    Packing p;
    p.config = cfg.name;
    p.mode = mode;
    p.limits = limits;
    for (const Node& n : nodes) {
        if (!meets(n.circle, limits.window)) continue;
        PackedCircle pc;
        pc.circle = n.circle;
        const LabeledCircle& src = starts[n.source];
        if (mode == Mode::super && n.height > 0) pc.kind = "super";
        else pc.kind = to_string(src.kind);
        pc.height = n.height;
        for (int g : n.word) pc.word.push_back(gens[g].id);
        pc.source = src.id;
        p.circles.push_back(std::move(pc));
    }
    return p;
}

int height_of(const Packing& p, const Circle& c) {
    bool oriented = p.mode == Mode::packing;
    Circle k = oriented ? c : unoriented(c);
    for (const auto& pc : p.circles) {
        Circle x = oriented ? pc.circle : unoriented(pc.circle);
        if (x.same(k)) return pc.height;
    }
    throw std::invalid_argument("circle not in packing: " + c.str());
}

}  // namespace cpack
