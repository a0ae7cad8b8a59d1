#include "cpack/arithmetic.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <limits>
#include <stdexcept>
#include <thread>

namespace cpack {

namespace {

constexpr size_t witness_cap = 10;

bool in_z(const Scalar& s) { return s.exact() && s.q().is_integer(); }

// s = n sqrt(3) with integral n
bool in_sqrt3_z(const Scalar& s, Int* n = nullptr) {
    if (!s.exact()) return false;
    const QuadExt& x = s.q();
    if (x.is_zero()) {
        if (n) *n = 0;
        return true;
    }
    if (x.d() != 3 || !x.a().is_zero() || !x.q().is_one()) return false;
    if (n) *n = x.b();
    return true;
}

bool even(const Int& v) { return mod(v, Int(2)).is_zero(); }

}  // namespace

IntegralityReport integrality_report(const Packing& p) {
    IntegralityReport r;
    bool eisenstein = false;
    for (const auto& pc : p.circles)
        for (const Scalar* s : {&pc.circle.co_curvature, &pc.circle.curvature, &pc.circle.h1, &pc.circle.h2})
            if (s->exact() && s->q().d() == 3) eisenstein = true;
    for (const auto& pc : p.circles) {
        const Circle& c = pc.circle;
        if (!c.exact()) throw std::invalid_argument("integrality needs an exact packing");
        ++r.total;
        bool ok = in_z(c.curvature) || (pc.kind == "dual" && in_sqrt3_z(c.curvature));
        if (ok) {
            ++r.integral;
        } else {
            ++r.non_integral;
            if (r.witnesses.size() < witness_cap) r.witnesses.push_back(c.str());
        }
        if (in_z(c.co_curvature) && in_z(c.curvature) && in_z(c.h1) && in_z(c.h2)) ++r.coordinate_integral;
        if (eisenstein) {
            LatticeKind k = pc.kind == "dual" ? LatticeKind::triangular_dual : LatticeKind::triangular_base;
            if (pc.kind != "super" && lattice_membership(k, c)) ++r.lattice_tallies[to_string(k)];
        }
    }
    return r;
}

std::string to_string(LatticeKind k) { return k == LatticeKind::triangular_base ? "triangular-base" : "triangular-dual"; }

LatticeKind lattice_kind_from_string(const std::string& s) {
    if (s == "triangular-base") return LatticeKind::triangular_base;
    if (s == "triangular-dual") return LatticeKind::triangular_dual;
    throw std::invalid_argument("unknown lattice kind: " + s);
}

bool lattice_membership(LatticeKind kind, const Circle& v) {
    for (const Scalar* s : {&v.co_curvature, &v.curvature, &v.h1, &v.h2}) {
        if (!s->exact()) throw std::invalid_argument("lattice membership needs exact coordinates");
        if (s->q().d() != 1 && s->q().d() != 3)
            throw std::invalid_argument("lattice membership needs the field Q(sqrt 3), got " + s->q().str());
    }
    if (kind == LatticeKind::triangular_base) {
        // h1 + i h2 = 2(m + n w) = (2m + n) + i n sqrt(3)
        Int n;
        if (!in_z(v.curvature) || !in_z(v.co_curvature) || !in_z(v.h1) || !in_sqrt3_z(v.h2, &n)) return false;
        return even(v.h1.q().a() - n);
    }
    // h1 + i h2 = 2i(m + n w) = -n sqrt(3) + i (2m + n)
    Int n;
    if (!in_sqrt3_z(v.curvature) || !in_sqrt3_z(v.co_curvature) || !in_sqrt3_z(v.h1, &n) || !in_z(v.h2))
        return false;
    n = -n;
    const Int& h2 = v.h2.q().a();
    if (!even(h2 - n)) return false;
    // excluded: 2 sqrt(3)(m' + n' w) = sqrt(3)(2m' + n') + i 3n'
    if (!mod(h2, Int(3)).is_zero()) return true;
    Int n2 = divexact(h2, Int(3));
    return !even(-n - n2);
}

Scalar CurvatureRelation::evaluate(const std::vector<Scalar>& b) const {
    if (static_cast<int>(b.size()) != arity)
        throw std::invalid_argument(name + " expects " + std::to_string(arity) + " curvatures");
    Scalar total = 0;
    for (const auto& t : terms) {
        Scalar m(t.coeff);
        for (int i = 0; i < arity; ++i)
            for (int e = 0; e < t.exponents[i]; ++e) m *= b[i];
        total += m;
    }
    return total;
}

int CurvatureRelation::degree() const {
    int d = 0;
    for (const auto& t : terms) {
        int s = 0;
        for (int e : t.exponents) s += e;
        d = std::max(d, s);
    }
    return d;
}

CurvatureRelation CurvatureRelation::relabeled(const std::vector<int>& perm) const {
    CurvatureRelation r = *this;
    for (auto& t : r.terms) {
        std::vector<int> e(arity, 0);
        for (int i = 0; i < arity; ++i) e[perm[i]] = t.exponents[i];
        t.exponents = e;
    }
    return r;
}

namespace {

// polynomial from a product of linear forms: sum of coeff * prod(sum_i l_i b_i)
struct Poly {
    int n;
    std::map<std::vector<int>, long long> c;

    static Poly var(int n, int i) {
        Poly p{n, {}};
        std::vector<int> e(n, 0);
        e[i] = 1;
        p.c[e] = 1;
        return p;
    }
    static Poly linear(const std::vector<long long>& l) {
        Poly p{static_cast<int>(l.size()), {}};
        for (size_t i = 0; i < l.size(); ++i)
            if (l[i]) p = p + var(p.n, static_cast<int>(i)) * l[i];
        return p;
    }
    friend Poly operator+(Poly a, const Poly& b) {
        for (const auto& [e, v] : b.c) a.c[e] += v;
        return a.trim();
    }
    friend Poly operator-(const Poly& a, const Poly& b) { return a + b * -1; }
    friend Poly operator*(Poly a, long long k) {
        for (auto& [e, v] : a.c) v *= k;
        return a.trim();
    }
    friend Poly operator*(const Poly& a, const Poly& b) {
        Poly p{a.n, {}};
        for (const auto& [ea, va] : a.c)
            for (const auto& [eb, vb] : b.c) {
                std::vector<int> e(a.n);
                for (int i = 0; i < a.n; ++i) e[i] = ea[i] + eb[i];
                p.c[e] += va * vb;
            }
        return p.trim();
    }
    Poly trim() {
        for (auto it = c.begin(); it != c.end();) it = it->second == 0 ? c.erase(it) : std::next(it);
        return *this;
    }
    std::vector<Monomial> terms() const {
        std::vector<Monomial> out;
        for (auto it = c.rbegin(); it != c.rend(); ++it) out.push_back({it->second, it->first});
        return out;
    }
};

Circle unit_at(const Scalar& x, const Scalar& y) { return from_center_radius({x, y}, Scalar(1)); }

std::vector<MotifPair> motif_of(const std::vector<Circle>& inst) {
    std::vector<MotifPair> m;
    for (size_t i = 0; i < inst.size(); ++i)
        for (size_t j = i + 1; j < inst.size(); ++j)
            m.push_back({static_cast<int>(i), static_cast<int>(j), classify_pair(inst[i], inst[j])});
    return m;
}

CurvatureRelation make_relation(const std::string& name, const std::string& config, const Poly& p,
                                std::vector<Circle> inst) {
    CurvatureRelation r;
    r.name = name;
    r.arity = p.n;
    r.terms = p.terms();
    r.motif = motif_of(inst);
    r.instance = std::move(inst);
    r.config = config;
    return r;
}

std::vector<CurvatureRelation> build_relations() {
    Scalar s3(QuadExt::sqrt_of(3));
    auto L = [](std::vector<long long> l) { return Poly::linear(l); };
    std::vector<CurvatureRelation> out;
    {
        // (b1 - 3b2)^2 + (b4 - 3b3)^2 - 2(b1 + b2)(b3 + b4)
        Poly u = L({1, -3, 0, 0}), v = L({0, 0, -3, 1});
        Poly p = u * u + v * v - L({1, 1, 0, 0}) * L({0, 0, 1, 1}) * 2;
        out.push_back(make_relation("square-quadratic", "square", p,
                                    {unit_at(-2, 0), unit_at(0, 0), unit_at(0, -2), unit_at(2, -2)}));
    }
    out.push_back(make_relation("square-linear-plus", "square", L({1, -1, 1, -1}),
                                {unit_at(-2, 0), unit_at(0, 2), unit_at(2, 0), unit_at(0, -2)}));
    out.push_back(make_relation("square-linear-ring", "square", L({1, -1, 1, -1}),
                                {unit_at(0, 2), unit_at(2, 2), unit_at(2, 0), unit_at(0, 0)}));
    {
        // (3b1 - b2 + 3b3 - b4)^2 - 12 b1 b3 - 4 b2 b4
        Poly u = L({3, -1, 3, -1});
        Poly p = u * u - Poly::var(4, 0) * Poly::var(4, 2) * 12 - Poly::var(4, 1) * Poly::var(4, 3) * 4;
        out.push_back(make_relation("triangular-quadratic", "triangular", p,
                                    {unit_at(0, 0), unit_at(2, 0), unit_at(1, -s3), unit_at(-1, -s3)}));
    }
    {
        // 2b1^2 + 2b2^2 + 2b3^2 + 10b4^2 - (b1 + b2 + b3 + b4)^2
        Poly p{4, {}};
        long long w[4] = {2, 2, 2, 10};
        for (int i = 0; i < 4; ++i) p = p + Poly::var(4, i) * Poly::var(4, i) * w[i];
        Poly s = L({1, 1, 1, 1});
        p = p - s * s;
        out.push_back(make_relation("triangular-quadratic-star", "triangular", p,
                                    {unit_at(-2, 0), unit_at(1, s3), unit_at(1, -s3), unit_at(0, 0)}));
    }
    // 2b1 - 2b2 - b4 + b3
    out.push_back(make_relation("triangular-linear", "triangular", L({2, -2, 1, -1}),
                                {unit_at(0, 0), unit_at(2, 0), unit_at(3, -s3), unit_at(-1, -s3)}));
    return out;
}

}  // namespace

std::vector<CurvatureRelation> builtin_relations() {
    static const std::vector<CurvatureRelation> all = build_relations();
    return all;
}

const CurvatureRelation& builtin_relation(const std::string& name) {
    static const std::vector<CurvatureRelation> all = build_relations();
    for (const auto& r : all)
        if (r.name == name) return r;
    throw std::invalid_argument("unknown relation: " + name);
}

CurvatureRelation relation_from_json(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw std::invalid_argument(std::string("relation: ") + e.what());
    }
    auto field = [&](const char* key) -> const nlohmann::json& {
        if (!j.contains(key)) throw std::invalid_argument(std::string("relation: missing field '") + key + "'");
        return j.at(key);
    };
    CurvatureRelation r;
    try {
        r.name = field("name").get<std::string>();
        r.arity = field("arity").get<int>();
        if (r.arity <= 0) throw std::invalid_argument("relation: field 'arity' must be positive");
        for (const auto& t : field("terms")) {
            Monomial m{t.at(0).get<long long>(), t.at(1).get<std::vector<int>>()};
            if (static_cast<int>(m.exponents.size()) != r.arity)
                throw std::invalid_argument("relation: field 'terms' has an exponent vector of the wrong length");
            for (int e : m.exponents)
                if (e < 0) throw std::invalid_argument("relation: field 'terms' has a negative exponent");
            r.terms.push_back(m);
        }
        for (const auto& m : field("motif")) {
            MotifPair p{m.at(0).get<int>(), m.at(1).get<int>(), pair_class_from_string(m.at(2).get<std::string>())};
            if (p.i < 0 || p.j < 0 || p.i >= r.arity || p.j >= r.arity)
                throw std::invalid_argument("relation: field 'motif' index out of range");
            r.motif.push_back(p);
        }
        if (j.contains("config")) r.config = j.at("config").get<std::string>();
        if (j.contains("instance")) {
            for (const auto& c : j.at("instance")) {
                auto v = c.get<std::vector<std::string>>();
                if (v.size() != 4) throw std::invalid_argument("relation: field 'instance' needs 4 coordinates per circle");
                r.instance.push_back({Scalar::parse(v[0]), Scalar::parse(v[1]), Scalar::parse(v[2]), Scalar::parse(v[3])});
            }
            if (static_cast<int>(r.instance.size()) != r.arity)
                throw std::invalid_argument("relation: field 'instance' must list arity circles");
        }
    } catch (const nlohmann::json::exception& e) {
        throw std::invalid_argument(std::string("relation: ") + e.what());
    }
    return r;
}

void check_motif(const CurvatureRelation& rel, const std::vector<Circle>& instance) {
    if (static_cast<int>(instance.size()) != rel.arity)
        throw std::invalid_argument(rel.name + ": instance has " + std::to_string(instance.size()) + " circles, expected " +
                                    std::to_string(rel.arity));
    for (const auto& m : rel.motif) {
        PairClass got = classify_pair(instance[m.i], instance[m.j]);
        if (got != m.cls)
            throw std::invalid_argument(rel.name + ": motif mismatch for circles " + std::to_string(m.i + 1) + " and " +
                                        std::to_string(m.j + 1) + " (" + to_string(got) + ", expected " +
                                        to_string(m.cls) + ")");
    }
}

namespace {

void record(RelationReport& r, const GroupWord& w, std::vector<Scalar> b, const Scalar& residual) {
    Scalar a = residual.abs();
    if (a > r.max_residual) r.max_residual = a;
    if (r.witnesses.size() < witness_cap) r.witnesses.push_back({w, std::move(b), residual});
}

bool residual_zero(const Scalar& s) {
    if (s.exact()) return s.q().is_zero();
    return std::fabs(s.f()) <= 1e-9;
}

using i128 = __int128;

// element a + b sqrt(d) of Z[sqrt d] in 128-bit words
struct Zd {
    i128 a = 0, b = 0;
};

struct Overflow {};

struct ZdRing {
    i128 d;

    static i128 add(i128 x, i128 y) {
        i128 r;
        if (__builtin_add_overflow(x, y, &r)) throw Overflow{};
        return r;
    }
    static bool narrow(i128 x) { return x < (i128(1) << 62) && x > -(i128(1) << 62); }
    static i128 mul(i128 x, i128 y) {
        if (narrow(x) && narrow(y)) return x * y;
        i128 r;
        if (__builtin_mul_overflow(x, y, &r)) throw Overflow{};
        return r;
    }
    Zd plus(Zd x, Zd y) const { return {add(x.a, y.a), add(x.b, y.b)}; }
    Zd minus(Zd x, Zd y) const {
        i128 a, b;
        if (__builtin_sub_overflow(x.a, y.a, &a) || __builtin_sub_overflow(x.b, y.b, &b)) throw Overflow{};
        return {a, b};
    }
    Zd times(Zd x, Zd y) const {
        return {add(mul(x.a, y.a), mul(d, mul(x.b, y.b))), add(mul(x.a, y.b), mul(x.b, y.a))};
    }
    Zd constant(long long k) const { return {k, 0}; }
    static bool zero(Zd x) { return x.a == 0 && x.b == 0; }
};

struct ScalarRing {
    Scalar plus(const Scalar& x, const Scalar& y) const { return x + y; }
    Scalar minus(const Scalar& x, const Scalar& y) const { return x - y; }
    Scalar times(const Scalar& x, const Scalar& y) const { return x * y; }
    Scalar constant(long long k) const { return Scalar(k); }
    static bool zero(const Scalar& x) { return residual_zero(x); }
};

std::optional<Zd> to_zd(const Scalar& s, int d) {
    if (!s.exact()) return std::nullopt;
    const QuadExt& x = s.q();
    if (!x.q().is_one()) return std::nullopt;
    if (!x.b().is_zero() && x.d() != d) return std::nullopt;
    if (!x.a().is_small() || !x.b().is_small()) return std::nullopt;
    return Zd{x.a().small(), x.b().small()};
}

template <class T>
using Vec4 = std::array<T, 4>;

// 2<v, w> = 2 h.h' - (b b~' + b~ b')
template <class T, class R>
T product2(const R& R_, const Vec4<T>& v, const Vec4<T>& w) {
    T hh = R_.plus(R_.times(v[2], w[2]), R_.times(v[3], w[3]));
    T bb = R_.plus(R_.times(v[1], w[0]), R_.times(v[0], w[1]));
    return R_.minus(R_.plus(hh, hh), bb);
}

template <class T, class R>
Vec4<T> reflect2(const R& R_, const Vec4<T>& m, const Vec4<T>& u) {
    T k = product2(R_, u, m);
    Vec4<T> out;
    for (int i = 0; i < 4; ++i) out[i] = R_.minus(u[i], R_.times(k, m[i]));
    return out;
}

// coefficients of the linear form u -> 2<v, u>
template <class T, class R>
Vec4<T> metric(const R& R_, const Vec4<T>& v) {
    return {R_.minus(R_.constant(0), v[1]), R_.minus(R_.constant(0), v[0]), R_.plus(v[2], v[2]), R_.plus(v[3], v[3])};
}

template <class T, class R>
T dot(const R& R_, const Vec4<T>& x, const Vec4<T>& y) {
    return R_.plus(R_.plus(R_.times(x[0], y[0]), R_.times(x[1], y[1])),
                   R_.plus(R_.times(x[2], y[2]), R_.times(x[3], y[3])));
}

// The words act on the covector u = w^-1 nu, and the doubled curvature of
// w(c_i) is <gamma_i, u>.  For relations of degree at most two the scaled
// residual is a quadratic polynomial S(u) = c0 + <l, u> + sum a_pq u_p u_q,
// and after u' = u - k m with k = <mu, u> it changes by
// -k (<l, m> + <beta, u>) + k^2 Q(m).
template <class T, class R>
struct WordSearch {
    const R& ring;
    const CurvatureRelation& rel;
    std::vector<Vec4<T>> gamma;
    std::vector<Vec4<T>> mirrors, mu, beta;
    std::vector<T> lm, qm;
    T c0;
    Vec4<T> l;
    T a[4][4];
    bool quadratic, linear;
    int max_length;
    int top_degree;
    std::vector<int> word;  // leftmost letter first
    size_t count = 0;
    std::vector<std::vector<int>> failures;

    WordSearch(const R& r, const CurvatureRelation& rel_, const std::vector<Vec4<T>>& inst,
               const std::vector<Vec4<T>>& ms, int max_len)
        : ring(r), rel(rel_), mirrors(ms), max_length(max_len), top_degree(rel_.degree()) {
        for (const auto& c : inst) gamma.push_back(metric(ring, c));
        for (const auto& m : mirrors) mu.push_back(metric(ring, m));
        quadratic = top_degree <= 2;
        linear = top_degree <= 1;
        if (!quadratic) return;
        T zero = ring.constant(0);
        c0 = zero;
        l = {zero, zero, zero, zero};
        for (auto& row : a)
            for (auto& x : row) x = zero;
        for (const auto& t : rel.terms) {
            std::vector<int> vars;
            for (int i = 0; i < rel.arity; ++i)
                for (int e = 0; e < t.exponents[i]; ++e) vars.push_back(i);
            T coeff = ring.constant(t.coeff * (1LL << (top_degree - static_cast<int>(vars.size()))));
            if (vars.empty()) {
                c0 = ring.plus(c0, coeff);
            } else if (vars.size() == 1) {
                for (int p = 0; p < 4; ++p) l[p] = ring.plus(l[p], ring.times(coeff, gamma[vars[0]][p]));
            } else {
                for (int p = 0; p < 4; ++p)
                    for (int q = 0; q < 4; ++q) {
                        T v = ring.times(coeff, ring.times(gamma[vars[0]][p], gamma[vars[1]][q]));
                        T& slot = a[std::min(p, q)][std::max(p, q)];
                        slot = ring.plus(slot, v);
                    }
            }
        }
        for (const auto& m : mirrors) {
            Vec4<T> b{zero, zero, zero, zero};
            T q = zero;
            for (int i = 0; i < 4; ++i)
                for (int j = i; j < 4; ++j) {
                    b[i] = ring.plus(b[i], ring.times(a[i][j], m[j]));
                    b[j] = ring.plus(b[j], ring.times(a[i][j], m[i]));
                    q = ring.plus(q, ring.times(a[i][j], ring.times(m[i], m[j])));
                }
            beta.push_back(b);
            qm.push_back(q);
            lm.push_back(dot(ring, l, m));
        }
    }

    T residual(const Vec4<T>& u) const {
        if (quadratic) {
            T s = ring.plus(c0, dot(ring, l, u));
            for (int i = 0; i < 4; ++i)
                for (int j = i; j < 4; ++j) s = ring.plus(s, ring.times(a[i][j], ring.times(u[i], u[j])));
            return s;
        }
        std::vector<T> v;
        for (const auto& g : gamma) v.push_back(dot(ring, g, u));
        T total = ring.constant(0);
        for (const auto& t : rel.terms) {
            int deg = 0;
            for (int e : t.exponents) deg += e;
            T m = ring.constant(t.coeff * (1LL << (top_degree - deg)));
            for (int i = 0; i < rel.arity; ++i)
                for (int e = 0; e < t.exponents[i]; ++e) m = ring.times(m, v[i]);
            total = ring.plus(total, m);
        }
        return total;
    }

    void check(const T& s) {
        ++count;
        if (!R::zero(s) && failures.size() < witness_cap) failures.push_back(word);
    }

    void visit(const Vec4<T>& u, const T& s) {
        check(s);
        if (static_cast<int>(word.size()) == max_length) return;
        bool leaf = static_cast<int>(word.size()) + 1 == max_length;
        for (size_t k = 0; k < mirrors.size(); ++k) {
            if (!word.empty() && word.back() == static_cast<int>(k)) continue;
            word.push_back(static_cast<int>(k));
            T kk = dot(ring, mu[k], u);
            Vec4<T> child;
            if (!quadratic || !leaf)
                for (int i = 0; i < 4; ++i) child[i] = ring.minus(u[i], ring.times(kk, mirrors[k][i]));
            if (linear) {
                T sc = ring.minus(s, ring.times(kk, lm[k]));
                if (leaf)
                    check(sc);
                else
                    visit(child, sc);
            } else if (quadratic) {
                T step = ring.times(kk, ring.plus(lm[k], dot(ring, beta[k], u)));
                T sc = ring.plus(ring.minus(s, step), ring.times(ring.times(kk, kk), qm[k]));
                if (leaf)
                    check(sc);
                else
                    visit(child, sc);
            } else {
                visit(child, residual(child));
            }
            word.pop_back();
        }
    }

    void start(const Vec4<T>& u) { visit(u, residual(u)); }
};

// covector nu with 2<v, nu> = 2b
template <class T, class R>
Vec4<T> curvature_covector(const R& ring) {
    return {ring.constant(-2), ring.constant(0), ring.constant(0), ring.constant(0)};
}

using SearchResult = std::pair<size_t, std::vector<std::vector<int>>>;

// runs the searches rooted at the empty word and at each first letter,
// merging results in letter order so threads do not change the output
template <class Run>
SearchResult search(const Run& run, size_t letters, int max_length, int threads) {
    std::vector<SearchResult> parts(letters + 1);
    parts[0] = run(std::nullopt);
    if (max_length > 0) {
        int nt = std::max(1, std::min<int>(threads, static_cast<int>(letters)));
        if (nt == 1) {
            for (size_t k = 0; k < letters; ++k) parts[k + 1] = run(static_cast<int>(k));
        } else {
            std::vector<std::thread> pool;
            std::vector<std::exception_ptr> errors(nt);
            for (int t = 0; t < nt; ++t)
                pool.emplace_back([&, t] {
                    try {
                        for (size_t k = t; k < letters; k += nt) parts[k + 1] = run(static_cast<int>(k));
                    } catch (...) {
                        errors[t] = std::current_exception();
                    }
                });
            for (auto& th : pool) th.join();
            for (auto& e : errors)
                if (e) std::rethrow_exception(e);
        }
    }
    SearchResult out{0, {}};
    for (auto& [c, f] : parts) {
        out.first += c;
        for (auto& w : f)
            if (out.second.size() < witness_cap) out.second.push_back(w);
    }
    return out;
}

template <class T, class R>
SearchResult generic_search(const R& ring, const CurvatureRelation& rel, const std::vector<Vec4<T>>& inst,
                            const std::vector<Vec4<T>>& mirrors, int max_length, int threads) {
    if (rel.degree() > 60) throw std::invalid_argument(rel.name + ": degree too large");
    Vec4<T> nu = curvature_covector<T>(ring);
    WordSearch<T, R> proto(ring, rel, inst, mirrors, max_length);
    auto run = [&](std::optional<int> first) {
        WordSearch<T, R> s = proto;
        if (!first) {
            s.max_length = 0;
            s.start(nu);
        } else {
            s.word.push_back(*first);
            s.start(reflect2(ring, mirrors[*first], nu));
        }
        return SearchResult{s.count, s.failures};
    };
    return search(run, mirrors.size(), max_length, threads);
}

// The same traversal for relations of degree at most two with the covector
// and mirror data in 64-bit words and the residual in 128 bits.
struct FastSearch {
    struct Z {
        long long a = 0, b = 0;
    };
    struct W {
        i128 a = 0, b = 0;
    };
    long long d;
    std::vector<std::array<Z, 4>> m, mu, beta;
    std::vector<Z> lm, qm;
    int max_length;
    std::vector<int> word;
    size_t count = 0;
    std::vector<std::vector<int>> failures;

    static long long narrow(i128 x) {
        if (x > std::numeric_limits<long long>::max() || x < std::numeric_limits<long long>::min()) throw Overflow{};
        return static_cast<long long>(x);
    }
    static Z narrow(const Zd& x) { return {narrow(x.a), narrow(x.b)}; }
    static std::array<Z, 4> narrow(const Vec4<Zd>& v) { return {narrow(v[0]), narrow(v[1]), narrow(v[2]), narrow(v[3])}; }

    static long long add(long long x, long long y) {
        long long r;
        if (__builtin_add_overflow(x, y, &r)) throw Overflow{};
        return r;
    }
    static long long sub(long long x, long long y) {
        long long r;
        if (__builtin_sub_overflow(x, y, &r)) throw Overflow{};
        return r;
    }
    static long long mul(long long x, long long y) {
        long long r;
        if (__builtin_mul_overflow(x, y, &r)) throw Overflow{};
        return r;
    }
    Z times(Z x, Z y) const {
        return {add(mul(x.a, y.a), mul(d, mul(x.b, y.b))), add(mul(x.a, y.b), mul(x.b, y.a))};
    }
    Z dot(const std::array<Z, 4>& x, const std::array<Z, 4>& y) const {
        Z s{0, 0};
        for (int i = 0; i < 4; ++i) {
            Z p = times(x[i], y[i]);
            s = {add(s.a, p.a), add(s.b, p.b)};
        }
        return s;
    }
    // exact 128-bit product: each partial product is below 2^126
    W wide(Z x, Z y) const {
        i128 a = i128(x.a) * y.a, a2 = i128(x.b) * mul(d, y.b);
        i128 b = i128(x.a) * y.b, b2 = i128(x.b) * y.a;
        return {a + a2, b + b2};
    }
    static W minus(W x, W y) {
        W r;
        if (__builtin_sub_overflow(x.a, y.a, &r.a) || __builtin_sub_overflow(x.b, y.b, &r.b)) throw Overflow{};
        return r;
    }

    void check(const W& s) {
        ++count;
        if ((s.a != 0 || s.b != 0) && failures.size() < witness_cap) failures.push_back(word);
    }

    void visit(const std::array<Z, 4>& u, const W& s) {
        check(s);
        if (static_cast<int>(word.size()) == max_length) return;
        bool leaf = static_cast<int>(word.size()) + 1 == max_length;
        for (size_t k = 0; k < m.size(); ++k) {
            if (!word.empty() && word.back() == static_cast<int>(k)) continue;
            word.push_back(static_cast<int>(k));
            Z kk = dot(mu[k], u);
            // S' = S - k (<l, m> + <beta, u> - k Q(m))
            Z inner = dot(beta[k], u);
            Z kq = times(kk, qm[k]);
            inner = {sub(add(lm[k].a, inner.a), kq.a), sub(add(lm[k].b, inner.b), kq.b)};
            W sc = minus(s, wide(kk, inner));
            if (leaf) {
                check(sc);
            } else {
                std::array<Z, 4> child;
                for (int i = 0; i < 4; ++i) {
                    Z p = times(kk, m[k][i]);
                    child[i] = {sub(u[i].a, p.a), sub(u[i].b, p.b)};
                }
                visit(child, sc);
            }
            word.pop_back();
        }
    }
};

SearchResult fast_search(long long d, const CurvatureRelation& rel, const std::vector<Vec4<Zd>>& inst,
                         const std::vector<Vec4<Zd>>& mirrors, int max_length, int threads) {
    ZdRing ring{d};
    WordSearch<Zd, ZdRing> ws(ring, rel, inst, mirrors, max_length);
    FastSearch proto;
    proto.d = d;
    proto.max_length = max_length;
    for (size_t k = 0; k < mirrors.size(); ++k) {
        proto.m.push_back(FastSearch::narrow(mirrors[k]));
        proto.mu.push_back(FastSearch::narrow(ws.mu[k]));
        proto.beta.push_back(FastSearch::narrow(ws.beta[k]));
        proto.lm.push_back(FastSearch::narrow(ws.lm[k]));
        proto.qm.push_back(FastSearch::narrow(ws.qm[k]));
    }
    Vec4<Zd> nu = curvature_covector<Zd>(ring);
    auto run = [&](std::optional<int> first) {
        FastSearch s = proto;
        Vec4<Zd> u = nu;
        if (!first) {
            s.max_length = 0;
        } else {
            s.word.push_back(*first);
            u = reflect2(ring, mirrors[*first], nu);
        }
        Zd r = ws.residual(u);
        s.visit(FastSearch::narrow(u), {r.a, r.b});
        return SearchResult{s.count, s.failures};
    };
    return search(run, mirrors.size(), max_length, threads);
}

Vec4<Scalar> as_vec(const Circle& c) { return {c.co_curvature, c.curvature, c.h1, c.h2}; }

}  // namespace

RelationReport verify_relation_orbit(const Configuration& cfg, const CurvatureRelation& rel,
                                     const std::vector<Circle>& instance, const std::vector<GroupWord>& words) {
    check_motif(rel, instance);
    RelationReport r;
    r.relation = rel.name;
    for (const auto& w : words) {
        GroupWord reduced = reduce_word(cfg, w);
        std::vector<Scalar> b;
        for (const Circle& c : instance) b.push_back(apply_word(cfg, reduced, c).curvature);
        Scalar res = rel.evaluate(b);
        ++r.words_checked;
        if (!residual_zero(res)) record(r, reduced, std::move(b), res);
    }
    return r;
}

RelationReport verify_relation_all_words(const Configuration& cfg, const CurvatureRelation& rel,
                                         const std::vector<Circle>& instance, int max_length, const Window& w,
                                         int threads) {
    check_motif(rel, instance);
    if (max_length < 0) throw std::invalid_argument("word length must be nonnegative");
    auto duals = cfg.circles(CircleKind::dual, w);
    std::vector<Circle> mirrors;
    for (const auto& d : duals) mirrors.push_back(d.circle);

    std::pair<size_t, std::vector<std::vector<int>>> result;
    bool fast = false;
    int d = cfg.field_d;
    std::vector<Vec4<Zd>> zi, zm;
    auto convert = [&](const std::vector<Circle>& in, std::vector<Vec4<Zd>>& out) {
        for (const Circle& c : in) {
            Vec4<Zd> v;
            auto s = as_vec(c);
            for (int k = 0; k < 4; ++k) {
                auto z = to_zd(s[k], d);
                if (!z) return false;
                v[k] = *z;
            }
            out.push_back(v);
        }
        return true;
    };
    if (convert(instance, zi) && convert(mirrors, zm)) {
        if (rel.degree() <= 2) {
            try {
                result = fast_search(d, rel, zi, zm, max_length, threads);
                fast = true;
            } catch (const Overflow&) {
            }
        }
        if (!fast) {
            try {
                result = generic_search<Zd>(ZdRing{d}, rel, zi, zm, max_length, threads);
                fast = true;
            } catch (const Overflow&) {
            }
        }
    }
    if (!fast) {
        std::vector<Vec4<Scalar>> si, sm;
        for (const Circle& c : instance) si.push_back(as_vec(c));
        for (const Circle& c : mirrors) sm.push_back(as_vec(c));
        result = generic_search<Scalar>(ScalarRing{}, rel, si, sm, max_length, threads);
    }

    RelationReport r;
    r.relation = rel.name;
    r.words_checked = result.first;
    for (const auto& idx : result.second) {
        GroupWord word;
        for (int k : idx) word.push_back(duals[k].id);
        std::vector<Scalar> b;
        for (const Circle& c : instance) b.push_back(apply_word(cfg, word, c).curvature);
        record(r, word, b, rel.evaluate(b));
    }
    return r;
}

}  // namespace cpack
