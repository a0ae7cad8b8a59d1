#include "cpack/inversive.hpp"

#include <doctest.h>

using namespace cpack;

namespace {

Scalar q(long long n, long long d = 1) { return Scalar(QuadExt::rational(n, d)); }
Circle c4(long long a, long long b, long long c, long long d) { return {Scalar(a), Scalar(b), Scalar(c), Scalar(d)}; }
Circle unit_at(long long x, long long y) { return from_center_radius({Scalar(x), Scalar(y)}, Scalar(1)); }

bool identical(const Circle& a, const Circle& b) {
    return a.co_curvature.same(b.co_curvature) && a.curvature.same(b.curvature) && a.h1.same(b.h1) &&
           a.h2.same(b.h2);
}

}  // namespace

TEST_CASE("from_center_radius examples") {
    CHECK(identical(unit_at(0, 0), c4(-1, 1, 0, 0)));
    CHECK(identical(unit_at(2, 0), c4(3, 1, 2, 0)));
    CHECK(identical(unit_at(4, 0), c4(15, 1, 4, 0)));
    Circle out = from_center_radius({Scalar(0), Scalar(0)}, Scalar(1), Orientation::interior_unbounded);
    CHECK(identical(out, c4(1, -1, 0, 0)));
    CHECK(unit_at(4, 0).quadric_defect().is_zero());
}

TEST_CASE("nonpositive radius is rejected") {
    CHECK_THROWS(from_center_radius({Scalar(0), Scalar(0)}, Scalar(0)));
    CHECK_THROWS(from_center_radius({Scalar(0), Scalar(0)}, Scalar(-1)));
}

TEST_CASE("from_line examples") {
    CHECK(identical(from_line({Scalar(1), Scalar(0)}, Scalar(0)), c4(0, 0, 1, 0)));
    CHECK(identical(from_line({Scalar(0), Scalar(1)}, Scalar(2)), c4(4, 0, 0, 1)));
    CHECK(identical(from_line({Scalar(0), Scalar(-1)}, Scalar(0)), c4(0, 0, 0, -1)));
    CHECK_THROWS(from_line({Scalar(1), Scalar(1)}, Scalar(0)));
}

TEST_CASE("line limit of large circles") {
    // circles tangent to y = 2 from above: b~ = 4 + 4/r and h2 = 1 + 2/r tend to the line (4, 0, 0, 1)
    for (long long r : {10, 1000, 100000}) {
        Circle c = from_center_radius({Scalar(0), Scalar(2 + r)}, Scalar(r));
        CHECK(c.co_curvature == Scalar(4) + q(4, r));
        CHECK(c.h2 == Scalar(1) + q(2, r));
        CHECK(c.h1 == Scalar(0));
        CHECK(c.curvature == q(1, r));
    }
}

TEST_CASE("inversive product examples") {
    CHECK(inversive_product(unit_at(0, 0), unit_at(2, 0)) == Scalar(-1));
    CHECK(inversive_product(unit_at(0, 0), unit_at(1, 1)) == Scalar(0));
    CHECK(inversive_product(c4(15, 1, 4, 0), c4(1, 1, 1, 1)) == Scalar(-4));
    CHECK(inversive_product(unit_at(3, 0), unit_at(3, 0)) == Scalar(1));
}

TEST_CASE("reflect examples") {
    Circle m = c4(1, 1, 1, 1);
    CHECK(identical(reflect(m, c4(-1, 1, 0, 0)), c4(-1, 1, 0, 0)));
    CHECK(identical(reflect(m, c4(15, 1, 4, 0)), c4(23, 9, 12, 8)));
    CHECK(identical(reflect(m, m), -m));
    Circle img = reflect(m, c4(15, 1, 4, 0));
    CHECK(img.center().x == q(4, 3));
    CHECK(img.center().y == q(8, 9));
    CHECK(img.radius() == q(1, 9));
}

TEST_CASE("reflect_geometric examples") {
    GeoCircle m{false, {Scalar(1), Scalar(1)}, Scalar(1), {}, {}};
    GeoCircle v{false, {Scalar(4), Scalar(0)}, Scalar(1), {}, {}};
    GeoCircle r = reflect_geometric(m, v);
    REQUIRE_FALSE(r.is_line);
    CHECK(r.center.x == q(4, 3));
    CHECK(r.center.y == q(8, 9));
    CHECK(r.radius == q(1, 9));

    GeoCircle unit{false, {Scalar(0), Scalar(0)}, Scalar(1), {}, {}};
    GeoCircle big{false, {Scalar(0), Scalar(0)}, Scalar(2), {}, {}};
    GeoCircle r2 = reflect_geometric(unit, big);
    CHECK(r2.radius == q(1, 2));
    CHECK(r2.center.x == Scalar(0));

    GeoCircle through{false, {q(1, 2), Scalar(0)}, q(1, 2), {}, {}};
    GeoCircle r3 = reflect_geometric(unit, through);
    REQUIRE(r3.is_line);
    GeoCircle x1{true, {}, {}, {Scalar(1), Scalar(0)}, Scalar(1)};
    CHECK(same_geometric(r3, x1));
}

TEST_CASE("reflect agrees with reflect_geometric") {
    Circle m = unit_at(1, 1);
    for (long long x = -3; x <= 3; ++x) {
        Circle v = from_center_radius({Scalar(x), Scalar(5)}, q(1, 2));
        CHECK(same_geometric(to_geometric(reflect(m, v)), reflect_geometric(to_geometric(m), to_geometric(v))));
    }
}

TEST_CASE("classify_pair examples") {
    CHECK(classify_pair(unit_at(0, 0), unit_at(2, 0)) == PairClass::externally_tangent);
    CHECK(classify_pair(unit_at(0, 0), unit_at(1, 1)) == PairClass::orthogonal);
    CHECK(classify_pair(unit_at(0, 0), unit_at(10, 0)) == PairClass::disjoint_exteriors);
    CHECK(classify_pair(unit_at(0, 0), unit_at(0, 0)) == PairClass::equal);
    CHECK(classify_pair(unit_at(0, 0), -unit_at(0, 0)) == PairClass::opposite);
    Circle small = from_center_radius({q(1, 2), Scalar(0)}, q(1, 2));
    CHECK(classify_pair(small, unit_at(0, 0)) == PairClass::internally_tangent);
    CHECK(classify_pair(unit_at(0, 0), unit_at(1, 0)) == PairClass::crossing);
    CHECK(inside(from_center_radius({Scalar(0), Scalar(0)}, q(1, 2)), unit_at(0, 0)));
    CHECK(pair_class_from_string(to_string(PairClass::externally_tangent)) == PairClass::externally_tangent);
}

TEST_CASE("isometry examples") {
    Circle v = c4(-1, 1, 0, 0);
    CHECK(identical(apply_isometry(Isometry::translation({Scalar(2), Scalar(0)}), v), c4(3, 1, 2, 0)));
    CHECK(identical(apply_isometry(Isometry::identity(), c4(23, 9, 12, 8)), c4(23, 9, 12, 8)));
    CHECK(identical(apply_isometry(Isometry::rotation({Scalar(0), Scalar(0)}, 4), c4(3, 1, 2, 0)), c4(3, 1, 0, 2)));
    Isometry g = Isometry::glide({Scalar(0), Scalar(1)}, {Scalar(1), Scalar(0)}, {Scalar(1), Scalar(0)});
    CHECK(compose(g, g).same(Isometry::translation({Scalar(2), Scalar(0)})));
    CHECK(compose(g, g.inverse()).is_identity());
    // conjugation of a reflection by an isometry
    Circle m = unit_at(1, 1), w = unit_at(4, 0);
    Isometry rot4 = Isometry::rotation({Scalar(3), Scalar(2)}, 4);
    CHECK(identical(reflect(apply_isometry(rot4, m), apply_isometry(rot4, w)), apply_isometry(rot4, reflect(m, w))));
}

TEST_CASE("float mode stays within tolerance") {
    Circle m = unit_at(1, 1).to_float(), v = unit_at(4, 0).to_float();
    Circle r = reflect(m, v);
    CHECK_FALSE(r.exact());
    CHECK(r.same(c4(23, 9, 12, 8).to_float()));
}
