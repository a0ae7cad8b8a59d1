#include "cpack/exact.hpp"

#include <cmath>
#include <functional>
#include <regex>
#include <stdexcept>

namespace cpack {

namespace {

bool squarefree(int d) {
    if (d < 1) return false;
    for (int p = 2; p * p <= d; ++p)
        if (d % (p * p) == 0) return false;
    return true;
}

size_t mix(size_t h, size_t v) { return h ^ (v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2)); }

// rational square root of num/den (den > 0), if any
std::optional<std::pair<Int, Int>> rational_sqrt(const Int& num, const Int& den) {
    if (num.sign() < 0) return std::nullopt;
    Int prod = num * den;
    if (!prod.is_perfect_square()) return std::nullopt;
    return std::make_pair(prod.isqrt(), den);
}

}  // namespace

int common_field(int d1, int d2) {
    if (d1 == d2 || d2 == 1) return d1;
    if (d1 == 1) return d2;
    throw std::domain_error("mixed quadratic fields sqrt(" + std::to_string(d1) + ") and sqrt(" +
                            std::to_string(d2) + ")");
}

QuadExt QuadExt::normalize(Int a, Int b, Int q, int d) {
    if (q.is_zero()) throw std::domain_error("zero denominator");
    if (!squarefree(d)) throw std::domain_error("field tag must be squarefree: " + std::to_string(d));
    if (d == 1 && !b.is_zero()) {
        a = a + b;
        b = 0;
    }
    if (q.sign() < 0) {
        a = -a;
        b = -b;
        q = -q;
    }
    QuadExt r;
    r.d_ = d;
    if (!q.is_one()) {
        Int g = gcd(gcd(a, b), q);
        if (!g.is_one()) {
            a = divexact(a, g);
            b = divexact(b, g);
            q = divexact(q, g);
        }
    }
    r.a_ = std::move(a);
    r.b_ = std::move(b);
    r.q_ = std::move(q);
    return r;
}

QuadExt QuadExt::with_field(int d) const {
    if (d == d_) return *this;
    if (!b_.is_zero()) common_field(d_, d);
    return normalize(a_, b_, q_, b_.is_zero() ? d : d_);
}

int QuadExt::sign() const {
    int sa = a_.sign(), sb = b_.sign();
    if (sb == 0) return sa;
    if (sa == 0) return sb;
    if (sa == sb) return sa;
    // opposite signs: compare a^2 with d*b^2
    int c = cmp(a_ * a_, Int(d_) * b_ * b_);
    return sa > 0 ? c : -c;
}

double QuadExt::to_double() const {
    if (b_.is_zero()) {
        if (a_.is_small() && q_.is_small()) return static_cast<double>(static_cast<long double>(a_.small()) / q_.small());
        mpq_class v(a_.to_mpz(), q_.to_mpz());
        return v.get_d();
    }
    if (a_.is_small() && b_.is_small() && q_.is_small() && std::llabs(a_.small()) < (1LL << 31) &&
        std::llabs(b_.small()) < (1LL << 31)) {
        long double a = a_.small(), b = b_.small(), q = q_.small();
        long double r = std::sqrt(static_cast<long double>(d_));
        if ((a > 0) == (b > 0) || a == 0) return static_cast<double>((a + b * r) / q);
        // avoid cancellation: a + b r = (a^2 - d b^2) / (a - b r)
        return static_cast<double>((a * a - d_ * b * b) / (q * (a - b * r)));
    }
    mpf_class a(a_.to_mpz(), 256), b(b_.to_mpz(), 256), q(q_.to_mpz(), 256), r(d_, 256);
    r = ::sqrt(r);
    mpf_class v = (a + b * r) / q;
    return v.get_d();
}

std::string QuadExt::str() const {
    if (b_.is_zero()) {
        if (q_.is_one()) return a_.str();
        return a_.str() + "/" + q_.str();
    }
    std::string s = "(" + a_.str() + (b_.sign() < 0 ? "-" : "+") + b_.abs().str() + "*sqrt(" + std::to_string(d_) + "))";
    return s + "/" + q_.str();
}

QuadExt QuadExt::parse(const std::string& text) {
    static const std::regex full(
        R"(^\s*\(\s*([+-]?\d+)\s*([+-])\s*(\d+)\s*\*\s*sqrt\(\s*(\d+)\s*\)\s*\)\s*(?:/\s*(\d+))?\s*$)");
    static const std::regex ratio(R"(^\s*([+-]?\d+)\s*(?:/\s*(\d+))?\s*$)");
    std::smatch m;
    if (std::regex_match(text, m, full)) {
        Int a = Int::parse(m[1].str());
        Int b = Int::parse(m[3].str());
        if (m[2].str() == "-") b = -b;
        int d = std::stoi(m[4].str());
        Int q = m[5].matched ? Int::parse(m[5].str()) : Int(1);
        return normalize(a, b, q, d);
    }
    if (std::regex_match(text, m, ratio)) {
        Int a = Int::parse(m[1].str());
        Int q = m[2].matched ? Int::parse(m[2].str()) : Int(1);
        return normalize(a, 0, q, 1);
    }
    throw std::invalid_argument("malformed exact scalar \"" + text + "\"");
}

QuadExt operator+(const QuadExt& x, const QuadExt& y) {
    int d = common_field(x.d_, y.d_);
    if (x.q_ == y.q_) return QuadExt::normalize(x.a_ + y.a_, x.b_ + y.b_, x.q_, d);
    return QuadExt::normalize(x.a_ * y.q_ + y.a_ * x.q_, x.b_ * y.q_ + y.b_ * x.q_, x.q_ * y.q_, d);
}

QuadExt operator-(const QuadExt& x, const QuadExt& y) {
    int d = common_field(x.d_, y.d_);
    if (x.q_ == y.q_) return QuadExt::normalize(x.a_ - y.a_, x.b_ - y.b_, x.q_, d);
    return QuadExt::normalize(x.a_ * y.q_ - y.a_ * x.q_, x.b_ * y.q_ - y.b_ * x.q_, x.q_ * y.q_, d);
}

QuadExt operator*(const QuadExt& x, const QuadExt& y) {
    int d = common_field(x.d_, y.d_);
    if (x.b_.is_zero() && y.b_.is_zero()) return QuadExt::normalize(x.a_ * y.a_, 0, x.q_ * y.q_, d);
    Int a = x.a_ * y.a_ + Int(d) * x.b_ * y.b_;
    Int b = x.a_ * y.b_ + x.b_ * y.a_;
    return QuadExt::normalize(a, b, x.q_ * y.q_, d);
}

QuadExt QuadExt::operator-() const {
    QuadExt r = *this;
    r.a_ = -a_;
    r.b_ = -b_;
    return r;
}

QuadExt QuadExt::inverse() const {
    if (is_zero()) throw std::domain_error("division by zero");
    Int norm = a_ * a_ - Int(d_) * b_ * b_;
    return normalize(q_ * a_, -(q_ * b_), norm, d_);
}

std::optional<QuadExt> QuadExt::sqrt() const {
    int s = sign();
    if (s < 0) return std::nullopt;
    if (s == 0) return QuadExt::normalize(0, 0, 1, d_);
    if (b_.is_zero()) {
        if (auto r = rational_sqrt(a_, q_)) return normalize(r->first, 0, r->second, d_);
        if (d_ > 1) {
            // a/q = d * (s / (q d))^2 means sqrt = s sqrt(d) / (q d)
            Int prod = a_ * q_ * Int(d_);
            if (prod.is_perfect_square()) return normalize(0, prod.isqrt(), q_ * Int(d_), d_);
        }
        return std::nullopt;
    }
    // (u + v sqrt d)^2 = A + B sqrt d with A = a/q, B = b/q
    Int n2 = a_ * a_ - Int(d_) * b_ * b_;
    if (!n2.is_perfect_square()) return std::nullopt;
    Int n = n2.isqrt();
    for (int pm : {1, -1}) {
        // u^2 = (a +- n) / (2q)
        Int num = a_ + Int(pm) * n;
        if (num.sign() <= 0) continue;
        auto u = rational_sqrt(num, Int(2) * q_);
        if (!u) continue;
        QuadExt uu = normalize(u->first, 0, u->second, d_);
        // v = B / (2u)
        QuadExt vv = normalize(b_, 0, Int(2) * q_, d_) * uu.inverse();
        QuadExt cand = normalize(0, 0, 1, d_);
        cand = uu + vv * sqrt_of(d_);
        if (cand.sign() < 0) cand = -cand;
        if (cand * cand == *this) return cand;
    }
    return std::nullopt;
}

bool operator==(const QuadExt& x, const QuadExt& y) {
    if (x.b_.is_zero() && y.b_.is_zero()) return x.a_ == y.a_ && x.q_ == y.q_;
    return x.d_ == y.d_ && x.a_ == y.a_ && x.b_ == y.b_ && x.q_ == y.q_;
}

size_t QuadExt::hash() const {
    size_t h = mix(a_.hash(), q_.hash());
    if (!b_.is_zero()) h = mix(mix(h, b_.hash()), static_cast<size_t>(d_));
    return h;
}

Scalar Scalar::parse(const std::string& s) {
    static const std::regex number(R"(^\s*[+-]?(\d+\.?\d*|\.\d+)([eE][+-]?\d+)?\s*$)");
    static const std::regex integer(R"(^\s*[+-]?\d+\s*$)");
    if (std::regex_match(s, number) && !std::regex_match(s, integer)) return real(std::stod(s));
    return Scalar(QuadExt::parse(s));
}

std::string Scalar::str() const {
    if (exact_) return x_.str();
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", f_);
    return buf;
}

int Scalar::sign() const {
    if (exact_) return x_.sign();
    if (std::fabs(f_) <= eps) return 0;
    return f_ > 0 ? 1 : -1;
}

std::optional<Scalar> Scalar::sqrt() const {
    if (exact_) {
        if (auto r = x_.sqrt()) return Scalar(*r);
        return std::nullopt;
    }
    if (f_ < -eps) return std::nullopt;
    return real(std::sqrt(std::max(0.0, f_)));
}

Scalar operator+(const Scalar& x, const Scalar& y) {
    if (x.exact_ && y.exact_) return Scalar(x.x_ + y.x_);
    return Scalar::real(x.f() + y.f());
}

Scalar operator-(const Scalar& x, const Scalar& y) {
    if (x.exact_ && y.exact_) return Scalar(x.x_ - y.x_);
    return Scalar::real(x.f() - y.f());
}

Scalar operator*(const Scalar& x, const Scalar& y) {
    if (x.exact_ && y.exact_) return Scalar(x.x_ * y.x_);
    return Scalar::real(x.f() * y.f());
}

Scalar operator/(const Scalar& x, const Scalar& y) {
    if (x.exact_ && y.exact_) return Scalar(x.x_ / y.x_);
    if (y.f() == 0.0) throw std::domain_error("division by zero");
    return Scalar::real(x.f() / y.f());
}

Scalar Scalar::operator-() const {
    if (exact_) return Scalar(-x_);
    return real(-f_);
}

bool Scalar::same(const Scalar& y) const {
    if (exact_ != y.exact_) return false;
    if (exact_) return x_ == y.x_ && (x_.is_rational() || x_.d() == y.x_.d());
    return f_ == y.f_;
}

Int floor_of(const Scalar& s) {
    double f = std::floor(s.f());
    Int k(static_cast<long long>(f));
    if (!s.exact()) return k;
    // correct a possible off-by-one from rounding
    while (Scalar(QuadExt(k)) > s) k -= 1;
    while (Scalar(QuadExt(k + 1)) <= s) k += 1;
    return k;
}

bool integer_value(const Scalar& s, Int& out) {
    if (s.exact()) {
        if (!s.q().is_integer()) return false;
        out = s.q().a();
        return true;
    }
    double r = std::round(s.f());
    if (std::fabs(s.f() - r) > 1e-6) return false;
    out = Int(static_cast<long long>(r));
    return true;
}

}  // namespace cpack
