#pragma once

#include "cpack/engine.hpp"

#include <map>
#include <string>
#include <vector>

namespace cpack {

struct IntegralityReport {
    size_t total = 0;
    size_t integral = 0;
    size_t non_integral = 0;
    std::vector<std::string> witnesses;  // first few non-integral circles
    // circles whose four inversive coordinates are all integers
    size_t coordinate_integral = 0;
    // over Q(sqrt 3): lattice kind -> circles of the matching kind in that set
    std::map<std::string, size_t> lattice_tallies;

    bool pass() const { return non_integral == 0; }
};

// curvatures must lie in Z, or in sqrt(3) Z for dual-kind circles over Q(sqrt 3);
// throws std::invalid_argument on a float packing
IntegralityReport integrality_report(const Packing& p);

enum class LatticeKind { triangular_base, triangular_dual };
std::string to_string(LatticeKind k);
LatticeKind lattice_kind_from_string(const std::string& s);

// base: b, b~ in Z and h1 + i h2 in 2 Z[w]; dual: b, b~ in sqrt(3) Z and
// h1 + i h2 in 2i Z[w] minus 2 sqrt(3) Z[w], where w = (1 + i sqrt 3) / 2
bool lattice_membership(LatticeKind kind, const Circle& v);

struct Monomial {
    long long coeff;
    std::vector<int> exponents;
};

struct MotifPair {
    int i, j;
    PairClass cls;
};

struct CurvatureRelation {
    std::string name;
    int arity = 0;
    std::vector<Monomial> terms;  // polynomial that vanishes on the relation
    std::vector<MotifPair> motif;
    std::vector<Circle> instance;
    std::string config;

    Scalar evaluate(const std::vector<Scalar>& b) const;
    int degree() const;
    // terms with the labels permuted: b_i -> b_{perm[i]}
    CurvatureRelation relabeled(const std::vector<int>& perm) const;
};

std::vector<CurvatureRelation> builtin_relations();
const CurvatureRelation& builtin_relation(const std::string& name);

// JSON object {"name", "arity", "terms": [[coeff, [e1..en]]...],
// "motif": [[i, j, class]...]} with optional "config" and "instance"
// (list of [b~, b, h1, h2] scalar strings)
CurvatureRelation relation_from_json(const std::string& text);

struct RelationWitness {
    GroupWord word;
    std::vector<Scalar> curvatures;
    Scalar residual;
};

struct RelationReport {
    std::string relation;
    size_t words_checked = 0;
    Scalar max_residual = 0;
    std::vector<RelationWitness> witnesses;  // first few nonzero residuals

    bool pass() const { return witnesses.empty(); }
};

// throws std::invalid_argument when the instance misses the motif pattern
void check_motif(const CurvatureRelation& rel, const std::vector<Circle>& instance);

RelationReport verify_relation_orbit(const Configuration& cfg, const CurvatureRelation& rel,
                                     const std::vector<Circle>& instance, const std::vector<GroupWord>& words);

// every reduced word of length at most max_length over the duals meeting w
RelationReport verify_relation_all_words(const Configuration& cfg, const CurvatureRelation& rel,
                                         const std::vector<Circle>& instance, int max_length, const Window& w,
                                         int threads = 1);

}  // namespace cpack
