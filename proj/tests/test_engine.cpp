#include "cpack/engine.hpp"

#include <doctest.h>

#include <algorithm>
#include <set>

using namespace cpack;

namespace {

Scalar q(long long n, long long d = 1) { return Scalar(QuadExt::rational(n, d)); }
Circle c4(long long a, long long b, long long c, long long d) { return {Scalar(a), Scalar(b), Scalar(c), Scalar(d)}; }
Circle unit_at(long long x, long long y) { return from_center_radius({Scalar(x), Scalar(y)}, Scalar(1)); }

std::string dual_id(const Configuration& cfg, long long x, long long y) {
    auto id = cfg.locate(unit_at(x, y), CircleKind::dual);
    REQUIRE(id.has_value());
    return *id;
}

bool contains(const Packing& p, const Circle& c) {
    return std::any_of(p.circles.begin(), p.circles.end(), [&](const PackedCircle& pc) { return pc.circle.same(c); });
}

}  // namespace

TEST_CASE("reduce_word examples") {
    Configuration cfg = make_config("square");
    std::string a = dual_id(cfg, 1, 1), b = dual_id(cfg, 3, 1), c = dual_id(cfg, 1, 3);
    CHECK(reduce_word(cfg, {a, a}).empty());
    CHECK(reduce_word(cfg, {a, b, b, c}) == GroupWord{a, c});
    CHECK(reduce_word(cfg, {a, b, a}) == GroupWord{a, b, a});
    CHECK(reduce_word(cfg, {a, b, c, c, b, a}).empty());
}

TEST_CASE("apply_word examples") {
    Configuration cfg = make_config("square");
    std::string d = dual_id(cfg, 1, 1);
    Circle v = c4(15, 1, 4, 0);
    CHECK(apply_word(cfg, {}, v).same(v));
    CHECK(apply_word(cfg, {d}, v).same(c4(23, 9, 12, 8)));
    CHECK(apply_word(cfg, {d, d}, v).same(v));
    CHECK_THROWS(apply_word(cfg, {"d99"}, v));
}

TEST_CASE("normal_form examples") {
    Configuration cfg = make_config("square");
    std::string d = dual_id(cfg, 1, 1), d2 = dual_id(cfg, 3, 1);
    Isometry g = Isometry::translation({Scalar(2), Scalar(0)});
    NormalForm nf = normal_form(cfg, {Letter(g), Letter(d)});
    CHECK(nf.word == GroupWord{d2});
    CHECK(nf.isometry.same(g));

    NormalForm single = normal_form(cfg, {Letter(d)});
    CHECK(single.word == GroupWord{d});
    CHECK(single.isometry.is_identity());

    NormalForm cancel = normal_form(cfg, {Letter(g), Letter(g.inverse())});
    CHECK(cancel.word.empty());
    CHECK(cancel.isometry.is_identity());
}

TEST_CASE("normal form acts like the mixed product") {
    Configuration cfg = make_config("square");
    std::string d = dual_id(cfg, 1, 1), e = dual_id(cfg, -1, 1);
    Isometry r = Isometry::rotation({Scalar(0), Scalar(0)}, 4);
    Isometry t = Isometry::translation({Scalar(0), Scalar(2)});
    std::vector<Letter> mixed{Letter(r), Letter(d), Letter(t), Letter(e), Letter(r)};
    NormalForm nf = normal_form(cfg, mixed);
    Circle v = from_center_radius({q(1, 3), q(2, 7)}, q(1, 5));
    Circle direct = v;
    for (auto it = mixed.rbegin(); it != mixed.rend(); ++it) {
        if (std::holds_alternative<Isometry>(*it)) direct = apply_isometry(std::get<Isometry>(*it), direct);
        else direct = apply_word(cfg, {std::get<std::string>(*it)}, direct);
    }
    CHECK(apply_word(cfg, nf.word, apply_isometry(nf.isometry, v)).same(direct));
}

TEST_CASE("generate at height one contains the reflected circle") {
    Configuration cfg = make_config("square");
    Limits lim;
    lim.max_height = 1;
    lim.min_radius = q(1, 100);
    lim.window = {Scalar(-1), Scalar(5), Scalar(-3), Scalar(3)};
    Packing p = generate(cfg, Mode::packing, lim);
    CHECK(contains(p, c4(23, 9, 12, 8)));
    CHECK(height_of(p, c4(23, 9, 12, 8)) == 1);
    CHECK(height_of(p, c4(15, 1, 4, 0)) == 0);
}

TEST_CASE("height two after a second reflection") {
    Configuration cfg = make_config("square");
    Circle h1 = c4(23, 9, 12, 8);
    Circle h2 = reflect(unit_at(3, 1), h1);
    Limits lim;
    lim.max_height = 3;
    lim.window = {Scalar(-1), Scalar(6), Scalar(-3), Scalar(4)};
    Packing p = generate(cfg, Mode::packing, lim);
    CHECK(height_of(p, h2) == 2);
}

TEST_CASE("height zero keeps exactly the base") {
    for (const std::string name : {"square", "triangular", "apollonian", "wallpaper:pg"}) {
        CAPTURE(name);
        Configuration cfg = make_config(name);
        Limits lim;
        lim.max_height = 0;
        lim.window = {Scalar(-5), Scalar(5), Scalar(-5), Scalar(5)};
        Packing p = generate(cfg, Mode::packing, lim);
        CHECK(p.circles.size() == cfg.circles(CircleKind::base, lim.window).size());
        for (const auto& pc : p.circles) CHECK(pc.height == 0);
    }
}

TEST_CASE("apollonian height two against brute-force enumeration") {
    Configuration cfg = make_config("apollonian");
    Limits lim;
    lim.max_height = 2;
    lim.min_radius = q(1, 1000000);
    lim.window = {Scalar(-50), Scalar(50), Scalar(-50), Scalar(50)};
    Packing p = generate(cfg, Mode::packing, lim);

    std::set<std::string> keys;
    for (const auto& pc : p.circles) keys.insert(unoriented(pc.circle).str());
    CHECK(keys.size() == p.circles.size());

    std::set<std::string> brute;
    for (const Circle& b : cfg.base) {
        brute.insert(unoriented(b).str());
        for (const Circle& d1 : cfg.dual) {
            Circle x = reflect(d1, b);
            brute.insert(unoriented(x).str());
            for (const Circle& d2 : cfg.dual) brute.insert(unoriented(reflect(d2, x)).str());
        }
    }
    CHECK(brute.size() == keys.size());
    CHECK(brute == keys);
}

TEST_CASE("thread count does not change the output") {
    Configuration cfg = make_config("triangular");
    Limits lim;
    lim.max_height = 3;
    lim.window = {Scalar(-4), Scalar(4), Scalar(-4), Scalar(4)};
    Packing a = generate(cfg, Mode::packing, lim, 1), b = generate(cfg, Mode::packing, lim, 3);
    REQUIRE(a.circles.size() == b.circles.size());
    for (size_t i = 0; i < a.circles.size(); ++i) {
        CHECK(a.circles[i].circle.same(b.circles[i].circle));
        CHECK(a.circles[i].word == b.circles[i].word);
    }
}

TEST_CASE("generated circles are preserved quadric points") {
    Configuration cfg = make_config("square");
    Limits lim;
    lim.max_height = 3;
    lim.window = {Scalar(-3), Scalar(3), Scalar(-3), Scalar(3)};
    for (Mode m : {Mode::packing, Mode::dual, Mode::super}) {
        Packing p = generate(cfg, m, lim);
        CHECK_FALSE(p.circles.empty());
        for (const auto& pc : p.circles) CHECK(pc.circle.quadric_defect().q().is_zero());
    }
    CHECK(mode_from_string("super") == Mode::super);
    CHECK_THROWS(mode_from_string("other"));
}
