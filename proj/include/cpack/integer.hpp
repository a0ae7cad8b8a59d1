#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <string>

namespace cpack {

// Arbitrary-precision integer that stays in a machine word until an
// operation overflows, then switches to a GMP integer.
class Int {
public:
    Int() = default;
    Int(long long v) : small_(v) {}
    Int(long v) : small_(v) {}
    Int(int v) : small_(v) {}
    explicit Int(const mpz_class& v);
    static Int parse(const std::string& s);

    bool is_small() const { return !big_; }
    int64_t small() const { return small_; }
    mpz_class to_mpz() const;
    std::string str() const;
    double to_double() const;

    int sign() const;
    bool is_zero() const { return !big_ && small_ == 0; }
    bool is_one() const { return !big_ && small_ == 1; }
    // floor of the square root for nonnegative values
    Int isqrt() const;
    bool is_perfect_square() const;

    friend Int operator+(const Int& x, const Int& y);
    friend Int operator-(const Int& x, const Int& y);
    friend Int operator*(const Int& x, const Int& y);
    // exact division; the caller guarantees y divides x
    friend Int divexact(const Int& x, const Int& y);
    // floor division and remainder with the sign of the divisor
    friend Int floordiv(const Int& x, const Int& y);
    friend Int mod(const Int& x, const Int& y);
    friend Int gcd(const Int& x, const Int& y);
    Int operator-() const;
    Int abs() const { return sign() < 0 ? -*this : *this; }

    Int& operator+=(const Int& y) { return *this = *this + y; }
    Int& operator-=(const Int& y) { return *this = *this - y; }
    Int& operator*=(const Int& y) { return *this = *this * y; }

    friend int cmp(const Int& x, const Int& y);
    friend bool operator==(const Int& x, const Int& y) { return cmp(x, y) == 0; }
    friend bool operator!=(const Int& x, const Int& y) { return cmp(x, y) != 0; }
    friend bool operator<(const Int& x, const Int& y) { return cmp(x, y) < 0; }
    friend bool operator<=(const Int& x, const Int& y) { return cmp(x, y) <= 0; }
    friend bool operator>(const Int& x, const Int& y) { return cmp(x, y) > 0; }
    friend bool operator>=(const Int& x, const Int& y) { return cmp(x, y) >= 0; }

    size_t hash() const;

private:
    void shrink();
    int64_t small_ = 0;
    bool big_ = false;
    mpz_class big_value_;
};

}  // namespace cpack
