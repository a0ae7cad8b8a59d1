#pragma once

#include "cpack/config.hpp"

#include <string>
#include <variant>
#include <vector>

namespace cpack {

// packing: orbit of the base under dual reflections; dual: orbit of the
// dual; super: orbit of both under reflections in base and dual circles
enum class Mode { packing, dual, super };
std::string to_string(Mode m);
Mode mode_from_string(const std::string& s);

// circle ids of mirrors; [d1, ..., dk] acts as sigma_d1 o ... o sigma_dk
using GroupWord = std::vector<std::string>;

GroupWord reduce_word(const Configuration& cfg, const GroupWord& w, Mode mode = Mode::packing);
Circle apply_word(const Configuration& cfg, const GroupWord& w, const Circle& v);

// a mixed product of mirror letters and plane isometries, leftmost acting last
using Letter = std::variant<std::string, Isometry>;

struct NormalForm {
    GroupWord word;
    Isometry isometry;
};
// rewrites the product as word * isometry using g sigma_d g^-1 = sigma_g(d)
NormalForm normal_form(const Configuration& cfg, const std::vector<Letter>& letters);

struct Limits {
    int max_height = 0;
    Scalar min_radius = Scalar(QuadExt::rational(1, 100));
    Window window;
    // intermediate circles are kept in the window grown by this margin
    Scalar margin = 2;
};

struct PackedCircle {
    Circle circle;
    std::string kind;  // base, dual or super
    int height = 0;
    GroupWord word;
    std::string source;
};

struct Packing {
    std::string config;
    Mode mode = Mode::packing;
    Limits limits;
    std::vector<PackedCircle> circles;
};

Packing generate(const Configuration& cfg, Mode mode, const Limits& limits, int threads = 1);

// recorded height of the packing circle equal to c (up to orientation
// outside packing mode)
int height_of(const Packing& p, const Circle& c);

// canonical orientation used for orientation-insensitive comparisons
Circle unoriented(const Circle& c);

}  // namespace cpack
