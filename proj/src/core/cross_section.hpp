#ifndef ZELF_CORE_CROSS_SECTION_HPP
#define ZELF_CORE_CROSS_SECTION_HPP

#include <string>

namespace zelf {

enum class CrossSectionKind {
    Rect2x1,   // width 2 x height 1 duct: domain |r| <= 2, |z| <= 1
    Rect1x2,   // width 1 x height 2 duct: domain |r| <= 1, |z| <= 2
};

// Geometry and fitted drag constant of a supported duct cross-section. All
// lengths are in units of l/2 with l = min{W, H}.
struct CrossSection {
    CrossSectionKind kind;
    double half_width;
    double half_height;
    double drag_constant;      // C in the secondary-drag fit
    double min_bend_radius;    // smallest physically admissible R-tilde

    bool contains(double r, double z) const {
        return r >= -half_width && r <= half_width && z >= -half_height && z <= half_height;
    }
    bool strictly_inside(double r, double z) const {
        return r > -half_width && r < half_width && z > -half_height && z < half_height;
    }
};

CrossSection cross_section(CrossSectionKind kind);

// Maps a duct aspect ratio W/H in {2, 1/2} to its cross-section. Throws
// std::invalid_argument for unsupported aspect ratios.
CrossSection cross_section_from_aspect_ratio(double width, double height);

std::string to_string(CrossSectionKind kind);

} // namespace zelf

#endif
