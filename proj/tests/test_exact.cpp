#include "cpack/exact.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace cpack;

TEST_CASE("normalize reduces by the common gcd") {
    QuadExt x = QuadExt::normalize(2, 0, 4, 3);
    CHECK(x.a() == Int(1));
    CHECK(x.b() == Int(0));
    CHECK(x.q() == Int(2));
}

TEST_CASE("normalize maps zero to 0/1") {
    QuadExt x = QuadExt::normalize(0, 0, 7, 2);
    CHECK(x.a() == Int(0));
    CHECK(x.b() == Int(0));
    CHECK(x.q() == Int(1));
    CHECK(x.is_zero());
}

TEST_CASE("normalize makes the denominator positive") {
    QuadExt x = QuadExt::normalize(-3, 3, -3, 3);
    CHECK(x.a() == Int(1));
    CHECK(x.b() == Int(-1));
    CHECK(x.q() == Int(1));
    CHECK(x.d() == 3);
}

TEST_CASE("zero denominator is rejected") { CHECK_THROWS(QuadExt::normalize(1, 1, 0, 3)); }

TEST_CASE("sign is decided exactly") {
    CHECK(QuadExt::normalize(1, -1, 1, 3).sign() == -1);
    CHECK(QuadExt::normalize(0, 0, 1, 2).sign() == 0);
    // 3 sqrt(3) = 5.196... > 5
    CHECK(QuadExt::normalize(-5, 3, 1, 3).sign() == 1);
    // 26^2 = 676 exceeds 3 * 15^2 = 675 by one
    CHECK(QuadExt::normalize(26, -15, 1, 3).sign() == 1);
    CHECK(QuadExt::normalize(-26, 15, 1, 3).sign() == -1);
}

TEST_CASE("conversion to double") {
    CHECK(QuadExt::normalize(1, 0, 1, 3).to_double() == 1.0);
    CHECK(QuadExt::normalize(0, 1, 1, 3).to_double() == doctest::Approx(1.7320508075688772).epsilon(1e-15));
    long double oracle = (5.0L - 3.0L * std::sqrt(2.0L)) / 7.0L;
    CHECK(QuadExt::normalize(5, -3, 7, 2).to_double() == doctest::Approx(static_cast<double>(oracle)).epsilon(1e-14));
}

TEST_CASE("field axioms on random samples") {
    std::mt19937_64 rng(7);
    std::uniform_int_distribution<int> u(-50, 50), pos(1, 20);
    for (int d : {2, 3}) {
        for (int t = 0; t < 300; ++t) {
            QuadExt x = QuadExt::normalize(u(rng), u(rng), pos(rng), d);
            QuadExt y = QuadExt::normalize(u(rng), u(rng), pos(rng), d);
            QuadExt z = QuadExt::normalize(u(rng), u(rng), pos(rng), d);
            CHECK((x + y) * z == x * z + y * z);
            CHECK(x - x == QuadExt(0));
            if (!x.is_zero()) {
                CHECK(x * x.inverse() == QuadExt(1));
                CHECK((x * x).sign() == 1);
            }
        }
    }
}

TEST_CASE("canonical strings round trip") {
    std::mt19937_64 rng(11);
    std::uniform_int_distribution<int> u(-1000, 1000), pos(1, 99);
    for (int t = 0; t < 200; ++t) {
        QuadExt x = QuadExt::normalize(u(rng), u(rng), pos(rng), t % 2 ? 2 : 3);
        QuadExt y = QuadExt::parse(x.str());
        CHECK(y == x);
        CHECK(y.str() == x.str());
    }
    CHECK(QuadExt::parse("(5-3*sqrt(2))/7") == QuadExt::normalize(5, -3, 7, 2));
    CHECK_THROWS_AS(QuadExt::parse("5-3*sqrt2"), std::invalid_argument);
}

TEST_CASE("mixing two nontrivial fields is rejected") {
    CHECK_THROWS(QuadExt::sqrt_of(2) + QuadExt::sqrt_of(3));
    CHECK_NOTHROW(QuadExt::sqrt_of(2) + QuadExt(1));
}

TEST_CASE("long words stay exact") {
    // powers of 2 + sqrt(3) overflow 64 bits and stay exact
    QuadExt x = QuadExt(2) + QuadExt::sqrt_of(3), p = QuadExt(1);
    for (int i = 0; i < 60; ++i) p = p * x;
    QuadExt back = p;
    for (int i = 0; i < 60; ++i) back = back * x.conjugate();
    CHECK(back == QuadExt(1));
}

TEST_CASE("scalar float mode uses the tolerance") {
    Scalar a = Scalar::real(1.0 + 1e-12), b = Scalar(1);
    CHECK(a == b);
    CHECK(Scalar::real(1.1) != b);
}
