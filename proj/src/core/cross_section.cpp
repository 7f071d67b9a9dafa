#include "core/cross_section.hpp"

#include <cmath>
#include <stdexcept>

namespace zelf {

CrossSection cross_section(CrossSectionKind kind) {
    switch (kind) {
        case CrossSectionKind::Rect2x1:
            return {kind, 2.0, 1.0, 0.02319, 2.0};
        case CrossSectionKind::Rect1x2:
            return {kind, 1.0, 2.0, 0.018542, 1.0};
    }
    throw std::invalid_argument("unknown cross-section kind");
}

CrossSection cross_section_from_aspect_ratio(double width, double height) {
    if (!(width > 0.0) || !(height > 0.0))
        throw std::invalid_argument("duct width and height must be positive");
    const double ar = width / height;
    if (std::abs(ar - 2.0) < 1e-9 * 2.0) return cross_section(CrossSectionKind::Rect2x1);
    if (std::abs(ar - 0.5) < 1e-9 * 0.5) return cross_section(CrossSectionKind::Rect1x2);
    throw std::invalid_argument("unsupported aspect ratio W/H = " + std::to_string(ar) +
                                "; supported ratios are 2 and 1/2");
}

std::string to_string(CrossSectionKind kind) {
    return kind == CrossSectionKind::Rect2x1 ? "2x1" : "1x2";
}

} // namespace zelf
