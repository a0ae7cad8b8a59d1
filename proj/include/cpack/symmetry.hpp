#pragma once

#include "cpack/config.hpp"

#include <optional>
#include <string>
#include <vector>

namespace cpack {

struct SymmetrySignature {
    int rotation_order = 1;
    bool has_reflection = false;
    bool has_off_axis_glide = false;
    // every center of maximal rotation order lies on a mirror (orders 3 and 4)
    bool centers_on_mirrors = false;
    int mirror_directions = 0;

    std::string str() const;
};

std::string group_from_signature(const SymmetrySignature& s);

// window whose safe interior covers a full fundamental cell around the origin
Window verification_window(const Configuration& cfg);

// g maps every base (dual) circle meeting the safe interior of w to a base
// (dual) circle of cfg; a failing circle id goes to witness
bool verify_isometry(const Configuration& cfg, const Isometry& g, const Window& w, std::string* witness = nullptr);
bool verify_isometry(const Configuration& cfg, const Isometry& g, std::string* witness = nullptr);

// exact global test: g normalizes the lattice and maps every motif circle
// into the configuration
bool preserves(const Configuration& cfg, const Isometry& g);

struct Classification {
    std::string group;  // wallpaper symbol, "finite", or empty when verification failed
    SymmetrySignature signature;
    size_t point_group_order = 0;
    std::vector<std::string> failures;
};

Classification classify_wallpaper(const Configuration& cfg);

std::optional<std::array<Point, 2>> translations(const Configuration& cfg);

struct Discovery {
    std::vector<Isometry> found;       // one representative per coset of the lattice
    std::vector<Isometry> undeclared;  // found but outside the declared group
};

// searches the lattice point group for symmetries mapping a motif circle to
// an equal-radius motif circle, then compares with the declared group
Discovery discover_symmetries(const Configuration& cfg);

}  // namespace cpack
