#pragma once

#include "cpack/engine.hpp"

#include <map>
#include <optional>
#include <string>

namespace cpack {

enum class FillMode { none, by_height, by_kind };
std::string to_string(FillMode m);
FillMode fill_mode_from_string(const std::string& s);

struct RenderStyle {
    double stroke_width = 0.02;  // in plane units
    // colors for kinds "base", "dual", "super" and for heights "h0", "h1", ...
    std::map<std::string, std::string> palette = default_palette();
    FillMode fill = FillMode::none;
    std::optional<Window> clip;  // defaults to the packing window
    int width_px = 800, height_px = 800;

    static std::map<std::string, std::string> default_palette();
};

// fixed notation with 9 significant digits and no trailing zeros
std::string format_number(double v);

std::string to_svg(const Packing& p, const RenderStyle& style = {});
// configurations have no window of their own, so one must be given
std::string to_svg(const Configuration& c, const Window& w, RenderStyle style = {});

}  // namespace cpack
