#pragma once

#include "cpack/exact.hpp"

#include <string>

namespace cpack {

struct Point {
    Scalar x, y;
};

// Oriented generalized circle in inversive coordinates (b~, b, h1, h2) with
// h1^2 + h2^2 - b b~ = 1.  For b != 0 the center is h / b and the radius
// 1 / |b|; b > 0 means the interior is the bounded disk.  A line has b = 0,
// b~ = 2 * offset and h the unit normal pointing into the interior.
struct Circle {
    Scalar co_curvature, curvature, h1, h2;

    bool exact() const { return co_curvature.exact() && curvature.exact() && h1.exact() && h2.exact(); }
    bool is_line() const { return curvature.is_zero(); }
    Point center() const;
    Scalar radius() const;
    double radius_f() const;
    double center_x_f() const { return h1.f() / curvature.f(); }
    double center_y_f() const { return h2.f() / curvature.f(); }
    // h1^2 + h2^2 - b b~ - 1
    Scalar quadric_defect() const;
    Circle operator-() const { return {-co_curvature, -curvature, -h1, -h2}; }
    Circle to_float() const;
    // identical coordinates (exact) or within eps (float)
    bool same(const Circle& o) const;
    std::string str() const;
};

enum class Orientation { interior_bounded, interior_unbounded };

Circle from_center_radius(const Point& center, const Scalar& radius,
                          Orientation o = Orientation::interior_bounded);
Circle from_line(const Point& unit_normal, const Scalar& offset);

Scalar inversive_product(const Circle& v, const Circle& w);
Circle reflect(const Circle& mirror, const Circle& v);

enum class PairClass {
    equal,
    opposite,
    externally_tangent,
    internally_tangent,
    orthogonal,
    disjoint_exteriors,
    nested,
    crossing
};
std::string to_string(PairClass c);
PairClass pair_class_from_string(const std::string& s);
PairClass classify_pair(const Circle& v, const Circle& w);

// true when the interior of v lies inside the interior of w (v != w)
bool inside(const Circle& v, const Circle& w);

// Unoriented circle or line in plain Euclidean terms, used as an independent
// oracle for reflect.
struct GeoCircle {
    bool is_line = false;
    Point center;
    Scalar radius;
    Point normal;  // unit, lines only
    Scalar offset; // line is {p : p . normal = offset}
};
GeoCircle to_geometric(const Circle& c);
GeoCircle reflect_geometric(const GeoCircle& mirror, const GeoCircle& v);
// same unoriented circle, exactly or within tol in float mode
bool same_geometric(const GeoCircle& a, const GeoCircle& b, double tol = 1e-9);

// z -> a z + t or z -> a conj(z) + t with |a| = 1
struct Isometry {
    Scalar ar = 1, ai = 0;
    bool conj = false;
    Scalar tr = 0, ti = 0;

    static Isometry identity() { return {}; }
    static Isometry translation(const Point& v);
    // rotation by k * 2 pi / n about center; n in {1, 2, 3, 4, 6}
    static Isometry rotation(const Point& center, int n, int k = 1);
    // reflection in the line through p with direction u (u need not be unit)
    static Isometry mirror(const Point& p, const Point& u);
    // mirror followed by a translation by shift along the axis
    static Isometry glide(const Point& p, const Point& u, const Point& shift);

    Point apply(const Point& z) const;
    Isometry inverse() const;
    bool same(const Isometry& o) const;
    bool is_identity() const;
    std::string str() const;
};
// (g * h)(z) = g(h(z))
Isometry compose(const Isometry& g, const Isometry& h);
Circle apply_isometry(const Isometry& g, const Circle& v);

}  // namespace cpack
