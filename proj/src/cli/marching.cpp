#include "cli/marching.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <utility>

namespace zelf_cli {

namespace {

struct Segment {
    GridPoint a;
    GridPoint b;
};

std::pair<double, double> key(const GridPoint& p) { return {p.r, p.z}; }

// Linear zero crossing between two nodes; exact zeros sit on the node.
GridPoint cross(double ra, double za, double va, double rb, double zb, double vb) {
    if (va == 0.0) return {ra, za};
    if (vb == 0.0) return {rb, zb};
    const double t = va / (va - vb);
    return {ra + t * (rb - ra), za + t * (zb - za)};
}

} // namespace

std::vector<std::vector<GridPoint>> zero_contours(const std::vector<double>& values,
                                                  std::size_t nr, std::size_t nz,
                                                  const std::vector<double>& r_coords,
                                                  const std::vector<double>& z_coords) {
    std::vector<Segment> segments;
    auto value = [&](std::size_t ir, std::size_t iz) { return values[ir * nz + iz]; };

    for (std::size_t ir = 0; ir + 1 < nr; ++ir) {
        for (std::size_t iz = 0; iz + 1 < nz; ++iz) {
            const double v00 = value(ir, iz), v01 = value(ir, iz + 1);
            const double v10 = value(ir + 1, iz), v11 = value(ir + 1, iz + 1);
            const double r0 = r_coords[ir], r1 = r_coords[ir + 1];
            const double z0 = z_coords[iz], z1 = z_coords[iz + 1];

            // Exact node zeros count as the positive side so all four cells
            // around such a node agree on the topology.
            int mask = 0;
            if (v00 >= 0.0) mask |= 1;
            if (v10 >= 0.0) mask |= 2;
            if (v11 >= 0.0) mask |= 4;
            if (v01 >= 0.0) mask |= 8;
            if (mask == 0 || mask == 15) continue;

            // Edge crossings, each computed in the canonical direction of
            // increasing coordinate so neighbouring cells produce bitwise
            // identical points on their shared edges.
            const GridPoint eb = cross(r0, z0, v00, r1, z0, v10);
            const GridPoint er = cross(r1, z0, v10, r1, z1, v11);
            const GridPoint et = cross(r0, z1, v01, r1, z1, v11);
            const GridPoint el = cross(r0, z0, v00, r0, z1, v01);

            switch (mask) {
                case 1: case 14: segments.push_back({el, eb}); break;
                case 2: case 13: segments.push_back({eb, er}); break;
                case 4: case 11: segments.push_back({er, et}); break;
                case 8: case 7:  segments.push_back({et, el}); break;
                case 3: case 12: segments.push_back({el, er}); break;
                case 6: case 9:  segments.push_back({eb, et}); break;
                case 5: case 10: {
                    // Saddle cell: disambiguate with the center average.
                    const double center = 0.25 * (v00 + v01 + v10 + v11);
                    const bool join_same = (center > 0.0) == ((mask == 5));
                    if (join_same) {
                        segments.push_back({el, eb});
                        segments.push_back({er, et});
                    } else {
                        segments.push_back({el, et});
                        segments.push_back({eb, er});
                    }
                    break;
                }
                default: break;
            }
        }
    }

    std::erase_if(segments, [](const Segment& s) { return key(s.a) == key(s.b); });

    // Chain segments into polylines through exactly-shared endpoints.
    std::multimap<std::pair<double, double>, std::size_t> by_end;
    for (std::size_t i = 0; i < segments.size(); ++i) {
        by_end.insert({key(segments[i].a), i});
        by_end.insert({key(segments[i].b), i});
    }
    std::vector<bool> used(segments.size(), false);
    std::vector<std::vector<GridPoint>> polylines;

    auto take_next = [&](const GridPoint& tip, GridPoint& next) -> bool {
        auto [lo, hi] = by_end.equal_range(key(tip));
        for (auto it = lo; it != hi; ++it) {
            const std::size_t idx = it->second;
            if (used[idx]) continue;
            used[idx] = true;
            next = (key(segments[idx].a) == key(tip)) ? segments[idx].b : segments[idx].a;
            return true;
        }
        return false;
    };

    for (std::size_t i = 0; i < segments.size(); ++i) {
        if (used[i]) continue;
        used[i] = true;
        std::vector<GridPoint> line{segments[i].a, segments[i].b};
        GridPoint next{};
        while (take_next(line.back(), next)) line.push_back(next);
        // Extend from the head as well.
        std::reverse(line.begin(), line.end());
        while (take_next(line.back(), next)) line.push_back(next);
        polylines.push_back(std::move(line));
    }
    return polylines;
}

} // namespace zelf_cli
