#pragma once

#include "cpack/inversive.hpp"

#include <array>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace cpack {

struct Window {
    Scalar xmin, xmax, ymin, ymax;

    bool valid() const { return xmin < xmax && ymin < ymax; }
    Window expanded(const Scalar& m) const { return {xmin - m, xmax + m, ymin - m, ymax + m}; }
    bool contains(const Point& p) const { return xmin <= p.x && p.x <= xmax && ymin <= p.y && p.y <= ymax; }
    std::string str() const;
};

// closure of the circle (or line) intersects the closed rectangle
bool meets(const Circle& c, const Window& w);
// closed disk of a bounded circle lies inside the rectangle
bool inside_window(const Circle& c, const Window& w);

enum class CircleKind { base, dual };
std::string to_string(CircleKind k);

struct LabeledCircle {
    std::string id;
    CircleKind kind;
    Circle circle;
};

// A labelled symmetry generator: translation by
// vec, rotation of the given order about point, mirror through point with
// direction vec, or glide along that axis by shift.
struct SymmetryGenerator {
    std::string kind;
    Point point;
    Point vec;
    int order = 1;
    Point shift;

    Isometry isometry() const;
};

struct Configuration {
    std::string name;
    int field_d = 1;
    // motif circles; for periodic configurations every lattice translate of a
    // motif circle is a configuration circle
    std::vector<Circle> base, dual;
    std::optional<std::array<Point, 2>> lattice;
    std::vector<SymmetryGenerator> symmetries;
    // wallpaper symbol the constructor intends, "finite" or empty
    std::string declared_group;

    bool exact() const;
    bool periodic() const { return lattice.has_value(); }
    const std::vector<Circle>& motif(CircleKind k) const { return k == CircleKind::base ? base : dual; }

    // all circles of the given kind meeting the window, in canonical order
    std::vector<LabeledCircle> circles(CircleKind k, const Window& w) const;
    std::vector<LabeledCircle> all_circles(const Window& w) const;
    // id of the configuration circle identical to c (orientation included)
    std::optional<std::string> locate(const Circle& c, CircleKind k) const;
    Circle circle_by_id(const std::string& id) const;
    CircleKind kind_of_id(const std::string& id) const;

    Configuration to_float() const;
};

std::string make_circle_id(CircleKind k, size_t motif_index, const std::optional<std::pair<Int, Int>>& offset);

// lattice coordinates (s, t) of p = s v1 + t v2
std::pair<Scalar, Scalar> lattice_coords(const std::array<Point, 2>& lattice, const Point& p);

// names: apollonian, square, triangular, hexagonal, wallpaper:<group>
Configuration make_config(const std::string& name);
std::vector<std::string> config_names();
const std::vector<std::string>& wallpaper_groups();

// geometric dilation by factor f about the origin (curvatures divide by f)
Configuration scale_config(const Configuration& c, const Scalar& f);

// translate c by a lattice vector so its center lies in the fundamental cell
Circle reduce_mod_lattice(const Circle& c, const std::array<Point, 2>& lattice);

// tangency point of two externally tangent circles
Point tangency_point(const Circle& v, const Circle& w);
// circle through three points, interior bounded
Circle circle_through(const Point& p1, const Point& p2, const Point& p3);

struct TangencyGraph {
    std::vector<LabeledCircle> vertices;
    std::vector<std::pair<int, int>> edges;
    std::vector<std::vector<int>> adjacency;  // cyclic order of tangency points
    std::vector<std::vector<int>> faces;
};
TangencyGraph tangency_graph(const std::vector<LabeledCircle>& circles, const Window& w);

struct CheckResult {
    std::string name;
    bool pass = true;
    std::vector<std::string> witnesses;  // circle ids or descriptions
    std::string detail;
};

struct ValidationReport {
    std::vector<CheckResult> checks;
    bool pass() const;
    const CheckResult* find(const std::string& name) const;
};

// ids of the circles orthogonal to c in cyclic order when they ring it
// (at least three, consecutive ones externally tangent); empty otherwise
std::vector<std::string> ring_of(const LabeledCircle& c, const std::vector<LabeledCircle>& others);

// region where truncation cannot affect local checks
Window safe_interior(const Configuration& c, const Window& w);

ValidationReport validate_base_dual(const Configuration& c, const Window& w);
ValidationReport check_duality(const Configuration& c, const Window& w);

enum class KleinianClass { finite, strip_with_translation, doubly_periodic, unclassified };
std::string to_string(KleinianClass k);
KleinianClass kleinian_class(const Configuration& c);

// dual configuration implied by a base motif: one dual per face of the
// tangency graph, reduced modulo the lattice
std::vector<Circle> derive_dual_motif(const std::vector<Circle>& base, const std::array<Point, 2>& lattice);

}  // namespace cpack
