#include "cpack/json_io.hpp"

#include <stdexcept>

namespace cpack {

using nlohmann::json;

namespace {

[[noreturn]] void schema_error(const std::string& field, const std::string& what) {
    throw std::invalid_argument("field '" + field + "': " + what);
}

const json& member(const json& j, const std::string& key, const std::string& field) {
    if (!j.is_object()) schema_error(field, "expected an object");
    auto it = j.find(key);
    if (it == j.end()) schema_error(field.empty() ? key : field + "." + key, "missing");
    return *it;
}

std::string sub(const std::string& field, const std::string& key) { return field.empty() ? key : field + "." + key; }
std::string idx(const std::string& field, size_t i) { return field + "[" + std::to_string(i) + "]"; }

std::string string_of(const json& j, const std::string& field) {
    if (!j.is_string()) schema_error(field, "expected a string");
    return j.get<std::string>();
}

long long integer_of(const json& j, const std::string& field) {
    if (!j.is_number_integer()) schema_error(field, "expected an integer");
    return j.get<long long>();
}

const json& array_of(const json& j, const std::string& field) {
    if (!j.is_array()) schema_error(field, "expected an array");
    return j;
}

json point_json(const Point& p) { return json::array({scalar_to_json(p.x), scalar_to_json(p.y)}); }

Point point_from_json(const json& j, const std::string& field) {
    if (!j.is_array() || j.size() != 2) schema_error(field, "expected [x, y]");
    return {scalar_from_json(j[0], idx(field, 0)), scalar_from_json(j[1], idx(field, 1))};
}

json symmetry_json(const SymmetryGenerator& g) {
    json data = json::object();
    if (g.kind == "translation") {
        data["vec"] = point_json(g.vec);
    } else if (g.kind == "rotation") {
        data["point"] = point_json(g.point);
        data["order"] = g.order;
    } else {
        data["point"] = point_json(g.point);
        data["vec"] = point_json(g.vec);
        if (g.kind == "glide") data["shift"] = point_json(g.shift);
    }
    return json{{"kind", g.kind}, {"data", data}};
}

SymmetryGenerator symmetry_from_json(const json& j, const std::string& field) {
    SymmetryGenerator g;
    g.kind = string_of(member(j, "kind", field), sub(field, "kind"));
    std::string f = sub(field, "data");
    const json& data = member(j, "data", field);
    if (g.kind == "translation") {
        g.vec = point_from_json(member(data, "vec", f), sub(f, "vec"));
    } else if (g.kind == "rotation") {
        g.point = point_from_json(member(data, "point", f), sub(f, "point"));
        g.order = static_cast<int>(integer_of(member(data, "order", f), sub(f, "order")));
        if (g.order != 2 && g.order != 3 && g.order != 4 && g.order != 6)
            schema_error(sub(f, "order"), "rotation order must be 2, 3, 4 or 6");
    } else if (g.kind == "mirror" || g.kind == "glide") {
        g.point = point_from_json(member(data, "point", f), sub(f, "point"));
        g.vec = point_from_json(member(data, "vec", f), sub(f, "vec"));
        if (g.kind == "glide") g.shift = point_from_json(member(data, "shift", f), sub(f, "shift"));
    } else {
        schema_error(sub(field, "kind"), "unknown symmetry kind \"" + g.kind + "\"");
    }
    return g;
}

json parse_document(const std::string& text) {
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        throw std::invalid_argument(std::string("JSON syntax error: ") + e.what());
    }
}

}  // namespace

json scalar_to_json(const Scalar& s) {
    if (s.exact()) return s.q().str();
    return s.f();
}

Scalar scalar_from_json(const json& j, const std::string& field) {
    if (j.is_number()) return Scalar::real(j.get<double>());
    if (!j.is_string()) schema_error(field, "expected a number or an exact scalar string");
    try {
        return Scalar(QuadExt::parse(j.get<std::string>()));
    } catch (const std::invalid_argument& e) {
        schema_error(field, e.what());
    }
}

json circle_to_json(const Circle& c) {
    return json{{"co_curvature", scalar_to_json(c.co_curvature)},
                {"curvature", scalar_to_json(c.curvature)},
                {"h1", scalar_to_json(c.h1)},
                {"h2", scalar_to_json(c.h2)}};
}

Circle circle_from_json(const json& j, const std::string& field) {
    Circle c;
    c.co_curvature = scalar_from_json(member(j, "co_curvature", field), sub(field, "co_curvature"));
    c.curvature = scalar_from_json(member(j, "curvature", field), sub(field, "curvature"));
    c.h1 = scalar_from_json(member(j, "h1", field), sub(field, "h1"));
    c.h2 = scalar_from_json(member(j, "h2", field), sub(field, "h2"));
    Scalar defect = c.quadric_defect();
    if (c.exact() ? !defect.q().is_zero() : std::fabs(defect.f()) > 1e-6)
        schema_error(field, "coordinates violate h1^2 + h2^2 - b b~ = 1");
    return c;
}

json window_to_json(const Window& w) {
    return json::array({scalar_to_json(w.xmin), scalar_to_json(w.ymin), scalar_to_json(w.xmax), scalar_to_json(w.ymax)});
}

Window window_from_json(const json& j, const std::string& field) {
    if (!j.is_array() || j.size() != 4) schema_error(field, "expected [x0, y0, x1, y1]");
    Window w{scalar_from_json(j[0], idx(field, 0)), scalar_from_json(j[2], idx(field, 2)),
             scalar_from_json(j[1], idx(field, 1)), scalar_from_json(j[3], idx(field, 3))};
    if (!w.valid()) schema_error(field, "empty window");
    return w;
}

json config_json(const Configuration& c) {
    json j;
    j["name"] = c.name;
    j["field_d"] = c.field_d;
    j["lattice"] = c.lattice ? json::array({point_json((*c.lattice)[0]), point_json((*c.lattice)[1])}) : json(nullptr);
    j["base"] = json::array();
    for (const Circle& x : c.base) j["base"].push_back(circle_to_json(x));
    j["dual"] = json::array();
    for (const Circle& x : c.dual) j["dual"].push_back(circle_to_json(x));
    j["symmetries"] = json::array();
    for (const auto& g : c.symmetries) j["symmetries"].push_back(symmetry_json(g));
    j["declared_group"] = c.declared_group;
    return j;
}

Configuration config_from_json_value(const json& j) {
    Configuration c;
    c.name = string_of(member(j, "name", ""), "name");
    c.field_d = static_cast<int>(integer_of(member(j, "field_d", ""), "field_d"));
    if (c.field_d < 1) schema_error("field_d", "must be a positive squarefree integer");
    const json& lat = member(j, "lattice", "");
    if (!lat.is_null()) {
        if (!lat.is_array() || lat.size() != 2) schema_error("lattice", "expected null or two vectors");
        c.lattice = std::array<Point, 2>{point_from_json(lat[0], "lattice[0]"), point_from_json(lat[1], "lattice[1]")};
    }
    for (const char* key : {"base", "dual"}) {
        const json& list = array_of(member(j, key, ""), key);
        auto& out = std::string(key) == "base" ? c.base : c.dual;
        for (size_t i = 0; i < list.size(); ++i) out.push_back(circle_from_json(list[i], idx(key, i)));
    }
    if (j.contains("symmetries")) {
        const json& list = array_of(j["symmetries"], "symmetries");
        for (size_t i = 0; i < list.size(); ++i) c.symmetries.push_back(symmetry_from_json(list[i], idx("symmetries", i)));
    }
    if (j.contains("declared_group")) c.declared_group = string_of(j["declared_group"], "declared_group");
    if (c.base.empty()) schema_error("base", "needs at least one circle");
    return c;
}

json packing_json(const Packing& p) {
    json j;
    j["config"] = p.config;
    j["mode"] = to_string(p.mode);
    j["limits"] = json{{"max_height", p.limits.max_height},
                       {"min_radius", scalar_to_json(p.limits.min_radius)},
                       {"window", window_to_json(p.limits.window)},
                       {"margin", scalar_to_json(p.limits.margin)}};
    j["circles"] = json::array();
    for (const auto& pc : p.circles) {
        j["circles"].push_back(json{{"circle", circle_to_json(pc.circle)},
                                    {"kind", pc.kind},
                                    {"height", pc.height},
                                    {"word", pc.word},
                                    {"source", pc.source}});
    }
    return j;
}

Packing packing_from_json_value(const json& j) {
    Packing p;
    p.config = string_of(member(j, "config", ""), "config");
    try {
        p.mode = mode_from_string(string_of(member(j, "mode", ""), "mode"));
    } catch (const std::invalid_argument& e) {
        schema_error("mode", e.what());
    }
    const json& lim = member(j, "limits", "");
    p.limits.max_height = static_cast<int>(integer_of(member(lim, "max_height", "limits"), "limits.max_height"));
    p.limits.min_radius = scalar_from_json(member(lim, "min_radius", "limits"), "limits.min_radius");
    p.limits.window = window_from_json(member(lim, "window", "limits"), "limits.window");
    if (lim.contains("margin")) p.limits.margin = scalar_from_json(lim["margin"], "limits.margin");
    const json& list = array_of(member(j, "circles", ""), "circles");
    for (size_t i = 0; i < list.size(); ++i) {
        std::string f = idx("circles", i);
        const json& e = list[i];
        PackedCircle pc;
        pc.circle = circle_from_json(member(e, "circle", f), sub(f, "circle"));
        pc.kind = string_of(member(e, "kind", f), sub(f, "kind"));
        if (pc.kind != "base" && pc.kind != "dual" && pc.kind != "super")
            schema_error(sub(f, "kind"), "expected base, dual or super");
        pc.height = static_cast<int>(integer_of(member(e, "height", f), sub(f, "height")));
        if (pc.height < 0) schema_error(sub(f, "height"), "must be nonnegative");
        const json& word = array_of(member(e, "word", f), sub(f, "word"));
        for (size_t k = 0; k < word.size(); ++k) pc.word.push_back(string_of(word[k], idx(sub(f, "word"), k)));
        pc.source = string_of(member(e, "source", f), sub(f, "source"));
        p.circles.push_back(std::move(pc));
    }
    return p;
}

std::string to_json(const Configuration& c) { return config_json(c).dump(2) + "\n"; }
std::string to_json(const Packing& p) { return packing_json(p).dump(1) + "\n"; }

Configuration config_from_json(const std::string& text) { return config_from_json_value(parse_document(text)); }
Packing packing_from_json(const std::string& text) { return packing_from_json_value(parse_document(text)); }

}  // namespace cpack
