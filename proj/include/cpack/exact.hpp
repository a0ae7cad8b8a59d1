#pragma once

#include "cpack/integer.hpp"

#include <optional>
#include <string>

namespace cpack {

// Exact element (a + b*sqrt(d)) / q of the real quadratic field Q(sqrt d).
// d = 1 stands for the rationals and mixes freely with any other field;
// two different nontrivial fields never mix.
class QuadExt {
public:
    QuadExt() = default;
    QuadExt(long long v) : a_(v) {}
    QuadExt(long v) : a_(v) {}
    QuadExt(int v) : a_(v) {}
    explicit QuadExt(Int v) : a_(std::move(v)) {}
    static QuadExt normalize(Int a, Int b, Int q, int d);
    static QuadExt rational(Int num, Int den) { return normalize(std::move(num), 0, std::move(den), 1); }
    static QuadExt sqrt_of(int d) { return normalize(0, 1, 1, d); }
    static QuadExt parse(const std::string& s);

    const Int& a() const { return a_; }
    const Int& b() const { return b_; }
    const Int& q() const { return q_; }
    int d() const { return d_; }

    int sign() const;
    bool is_zero() const { return a_.is_zero() && b_.is_zero(); }
    bool is_rational() const { return b_.is_zero(); }
    bool is_integer() const { return b_.is_zero() && q_.is_one(); }
    double to_double() const;
    std::string str() const;

    QuadExt inverse() const;
    QuadExt conjugate() const { return normalize(a_, -b_, q_, d_); }
    // square root inside the same field, if it exists
    std::optional<QuadExt> sqrt() const;
    // the same value tagged with field d (only legal for rationals or equal tags)
    QuadExt with_field(int d) const;

    friend QuadExt operator+(const QuadExt& x, const QuadExt& y);
    friend QuadExt operator-(const QuadExt& x, const QuadExt& y);
    friend QuadExt operator*(const QuadExt& x, const QuadExt& y);
    friend QuadExt operator/(const QuadExt& x, const QuadExt& y) { return x * y.inverse(); }
    QuadExt operator-() const;

    // identical representation; values in different nontrivial fields compare unequal
    friend bool operator==(const QuadExt& x, const QuadExt& y);
    friend bool operator!=(const QuadExt& x, const QuadExt& y) { return !(x == y); }

    size_t hash() const;

private:
    Int a_ = 0, b_ = 0, q_ = 1;
    int d_ = 1;
};

int common_field(int d1, int d2);

// Runtime scalar used throughout the geometry: either an exact QuadExt or a
// double.  Mixed operations fall back to floating point.
class Scalar {
public:
    static constexpr double eps = 1e-9;

    Scalar() = default;
    Scalar(int v) : x_(v) {}
    Scalar(long long v) : x_(v) {}
    Scalar(long v) : x_(v) {}
    Scalar(QuadExt x) : x_(std::move(x)) {}
    static Scalar real(double f) {
        Scalar s;
        s.exact_ = false;
        s.f_ = f;
        return s;
    }
    static Scalar parse(const std::string& s);

    bool exact() const { return exact_; }
    const QuadExt& q() const { return x_; }
    double f() const { return exact_ ? x_.to_double() : f_; }
    std::string str() const;
    Scalar to_float() const { return real(f()); }

    // sign with tolerance eps in float mode
    int sign() const;
    bool is_zero() const { return sign() == 0; }
    std::optional<Scalar> sqrt() const;
    Scalar abs() const { return sign() < 0 ? -*this : *this; }

    friend Scalar operator+(const Scalar& x, const Scalar& y);
    friend Scalar operator-(const Scalar& x, const Scalar& y);
    friend Scalar operator*(const Scalar& x, const Scalar& y);
    friend Scalar operator/(const Scalar& x, const Scalar& y);
    Scalar operator-() const;
    Scalar& operator+=(const Scalar& y) { return *this = *this + y; }
    Scalar& operator-=(const Scalar& y) { return *this = *this - y; }
    Scalar& operator*=(const Scalar& y) { return *this = *this * y; }

    // value comparisons (tolerant in float mode)
    friend int compare(const Scalar& x, const Scalar& y) { return (x - y).sign(); }
    friend bool operator==(const Scalar& x, const Scalar& y) { return compare(x, y) == 0; }
    friend bool operator!=(const Scalar& x, const Scalar& y) { return compare(x, y) != 0; }
    friend bool operator<(const Scalar& x, const Scalar& y) { return compare(x, y) < 0; }
    friend bool operator<=(const Scalar& x, const Scalar& y) { return compare(x, y) <= 0; }
    friend bool operator>(const Scalar& x, const Scalar& y) { return compare(x, y) > 0; }
    friend bool operator>=(const Scalar& x, const Scalar& y) { return compare(x, y) >= 0; }

    // identical representation (exact) or identical bits (float)
    bool same(const Scalar& y) const;

private:
    bool exact_ = true;
    QuadExt x_;
    double f_ = 0.0;
};

// floor of a scalar as an integer
Int floor_of(const Scalar& s);
// true when s is an integer (within 1e-6 in float mode); the value goes to out
bool integer_value(const Scalar& s, Int& out);

}  // namespace cpack
