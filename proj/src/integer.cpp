#include "cpack/integer.hpp"

#include <functional>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace cpack {

Int::Int(const mpz_class& v) : big_(true), big_value_(v) { shrink(); }

void Int::shrink() {
    if (big_ && big_value_.fits_slong_p()) {
        small_ = big_value_.get_si();
        big_ = false;
        big_value_ = 0;
    }
}

mpz_class Int::to_mpz() const {
    if (big_) return big_value_;
    mpz_class r;
    mpz_set_si(r.get_mpz_t(), static_cast<long>(small_));
    return r;
}

Int Int::parse(const std::string& s) {
    if (s.empty()) throw std::invalid_argument("empty integer literal");
    size_t start = (s[0] == '-' || s[0] == '+') ? 1 : 0;
    if (start == s.size()) throw std::invalid_argument("bad integer literal: " + s);
    for (size_t i = start; i < s.size(); ++i)
        if (s[i] < '0' || s[i] > '9') throw std::invalid_argument("bad integer literal: " + s);
    mpz_class v;
    if (v.set_str(s[0] == '+' ? s.substr(1) : s, 10) != 0)
        throw std::invalid_argument("bad integer literal: " + s);
    return Int(v);
}

std::string Int::str() const { return big_ ? big_value_.get_str() : std::to_string(small_); }

double Int::to_double() const { return big_ ? big_value_.get_d() : static_cast<double>(small_); }

int Int::sign() const {
    if (big_) return sgn(big_value_);
    return (small_ > 0) - (small_ < 0);
}

Int Int::isqrt() const {
    if (sign() < 0) throw std::domain_error("square root of negative integer");
    mpz_class r;
    mpz_class v = to_mpz();
    mpz_sqrt(r.get_mpz_t(), v.get_mpz_t());
    return Int(r);
}

bool Int::is_perfect_square() const {
    if (sign() < 0) return false;
    mpz_class v = to_mpz();
    return mpz_perfect_square_p(v.get_mpz_t()) != 0;
}

Int operator+(const Int& x, const Int& y) {
    if (!x.big_ && !y.big_) {
        long long r;
        if (!__builtin_add_overflow(x.small_, y.small_, &r)) return Int(r);
    }
    return Int(mpz_class(x.to_mpz() + y.to_mpz()));
}

Int operator-(const Int& x, const Int& y) {
    if (!x.big_ && !y.big_) {
        long long r;
        if (!__builtin_sub_overflow(x.small_, y.small_, &r)) return Int(r);
    }
    return Int(mpz_class(x.to_mpz() - y.to_mpz()));
}

Int operator*(const Int& x, const Int& y) {
    if (!x.big_ && !y.big_) {
        long long r;
        if (!__builtin_mul_overflow(x.small_, y.small_, &r)) return Int(r);
    }
    return Int(mpz_class(x.to_mpz() * y.to_mpz()));
}

Int Int::operator-() const {
    if (!big_ && small_ != std::numeric_limits<int64_t>::min()) return Int(static_cast<long long>(-small_));
    return Int(mpz_class(-to_mpz()));
}

Int divexact(const Int& x, const Int& y) {
    if (y.is_zero()) throw std::domain_error("division by zero");
    if (!x.big_ && !y.big_ && !(x.small_ == std::numeric_limits<int64_t>::min() && y.small_ == -1))
        return Int(static_cast<long long>(x.small_ / y.small_));
    mpz_class r;
    mpz_class a = x.to_mpz(), b = y.to_mpz();
    mpz_divexact(r.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return Int(r);
}

Int floordiv(const Int& x, const Int& y) {
    if (y.is_zero()) throw std::domain_error("division by zero");
    mpz_class r;
    mpz_class a = x.to_mpz(), b = y.to_mpz();
    mpz_fdiv_q(r.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return Int(r);
}

Int mod(const Int& x, const Int& y) { return x - floordiv(x, y) * y; }

Int gcd(const Int& x, const Int& y) {
    if (!x.big_ && !y.big_ && x.small_ != std::numeric_limits<int64_t>::min() &&
        y.small_ != std::numeric_limits<int64_t>::min())
        return Int(static_cast<long long>(std::gcd(x.small_, y.small_)));
    mpz_class r;
    mpz_class a = x.to_mpz(), b = y.to_mpz();
    mpz_gcd(r.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return Int(r);
}

int cmp(const Int& x, const Int& y) {
    if (!x.big_ && !y.big_) return (x.small_ > y.small_) - (x.small_ < y.small_);
    int c = ::cmp(x.to_mpz(), y.to_mpz());
    return (c > 0) - (c < 0);
}

size_t Int::hash() const {
    if (!big_) return std::hash<int64_t>{}(small_);
    return std::hash<std::string>{}(big_value_.get_str(16));
}

}  // namespace cpack
