#include "cpack/json_io.hpp"
#include "cpack/render.hpp"

#include <doctest.h>

#include <algorithm>
#include <cstdlib>
#include <string>

using namespace cpack;

namespace {

Packing small_packing(int threads = 1) {
    Limits lim;
    lim.max_height = 2;
    lim.window = {Scalar(-3), Scalar(3), Scalar(-3), Scalar(3)};
    return generate(make_config("wallpaper:p4"), Mode::packing, lim, threads);
}

size_t count(const std::string& s, const std::string& needle) {
    size_t n = 0;
    for (size_t p = s.find(needle); p != std::string::npos; p = s.find(needle, p + 1)) ++n;
    return n;
}

}  // namespace

TEST_CASE("configuration JSON round trip") {
    for (const std::string name : {"square", "triangular", "apollonian", "wallpaper:p4", "wallpaper:p31m"}) {
        CAPTURE(name);
        Configuration c = make_config(name);
        std::string text = to_json(c);
        Configuration back = config_from_json(text);
        CHECK(to_json(back) == text);
        CHECK(back.base.size() == c.base.size());
    }
}

TEST_CASE("packing JSON round trip") {
    Packing p = small_packing();
    std::string text = to_json(p);
    Packing back = packing_from_json(text);
    CHECK(to_json(back) == text);
    CHECK(text.find("\"(5+3*sqrt(2))/1\"") != std::string::npos);
}

TEST_CASE("exact scalars parse from strings") {
    Scalar s = scalar_from_json(nlohmann::json("(5-3*sqrt(2))/7"), "x");
    CHECK(s.exact());
    CHECK(s.q() == QuadExt::normalize(5, -3, 7, 2));
    CHECK_FALSE(scalar_from_json(nlohmann::json(0.5), "x").exact());
}

TEST_CASE("schema errors name the field") {
    std::string text = to_json(make_config("square"));
    auto j = nlohmann::json::parse(text);
    j["base"][0]["curvature"] = "2";
    try {
        config_from_json(j.dump());
        FAIL("expected an error");
    } catch (const std::invalid_argument& e) {
        CHECK(std::string(e.what()).find("base[0]") != std::string::npos);
    }
    j = nlohmann::json::parse(text);
    j["base"][0].erase("h1");
    try {
        config_from_json(j.dump());
        FAIL("expected an error");
    } catch (const std::invalid_argument& e) {
        CHECK(std::string(e.what()).find("base[0].h1") != std::string::npos);
    }
    try {
        config_from_json("{\"name\": ");
        FAIL("expected an error");
    } catch (const std::invalid_argument& e) {
        CHECK(std::string(e.what()).find("JSON syntax error") != std::string::npos);
    }
}

TEST_CASE("SVG output is deterministic") {
    std::string a = to_svg(small_packing(1)), b = to_svg(small_packing(3));
    CHECK(a == b);
    CHECK(a.rfind("<?xml", 0) == 0);
    CHECK(count(a, "<circle") == small_packing().circles.size());
}

TEST_CASE("square configuration render counts match the circles meeting the window") {
    Configuration c = make_config("square");
    Window w{Scalar(-4), Scalar(4), Scalar(-4), Scalar(4)};
    std::string svg = to_svg(c, w);
    size_t base = 0, dual = 0;
    // unit circles at even (base) or odd-odd (dual) centers within distance 1 of the box
    for (long long x = -6; x <= 6; ++x)
        for (long long y = -6; y <= 6; ++y) {
            long long dx = std::max(0LL, std::abs(x) - 4), dy = std::max(0LL, std::abs(y) - 4);
            if (dx * dx + dy * dy > 1) continue;
            if (x % 2 == 0 && y % 2 == 0) ++base;
            if (x % 2 != 0 && y % 2 != 0) ++dual;
        }
    CHECK(count(svg, "stroke=\"#1f3fbf\"") == base);
    CHECK(count(svg, "stroke=\"#d02020\"") == dual);
}

TEST_CASE("empty packing renders an empty group") {
    Packing p;
    p.limits.window = {Scalar(0), Scalar(1), Scalar(0), Scalar(1)};
    std::string svg = to_svg(p);
    CHECK(count(svg, "<circle") == 0);
    CHECK(svg.find("</svg>") != std::string::npos);
}

TEST_CASE("number formatting") {
    CHECK(format_number(0.5) == "0.5");
    CHECK(format_number(-0.0) == "0");
    CHECK(format_number(4.0 / 3.0) == "1.33333333");
    CHECK(format_number(-12) == "-12");
    CHECK_THROWS(format_number(1.0 / 0.0));
}

TEST_CASE("fill modes") {
    RenderStyle st;
    st.fill = FillMode::by_kind;
    CHECK(to_svg(small_packing(), st).find("fill-opacity") != std::string::npos);
    CHECK(fill_mode_from_string("by-height") == FillMode::by_height);
    CHECK_THROWS(fill_mode_from_string("solid"));
}
