#ifndef ZELF_CLI_MARCHING_HPP
#define ZELF_CLI_MARCHING_HPP

#include <cstddef>
#include <vector>

namespace zelf_cli {

struct GridPoint {
    double r;
    double z;
};

// Zero-level polylines of a scalar field sampled on a uniform node grid
// (values indexed [ir * nz + iz]), extracted by marching squares with linear
// interpolation along cell edges and chained into polylines. Deterministic
// for identical inputs.
std::vector<std::vector<GridPoint>> zero_contours(const std::vector<double>& values,
                                                  std::size_t nr, std::size_t nz,
                                                  const std::vector<double>& r_coords,
                                                  const std::vector<double>& z_coords);

} // namespace zelf_cli

#endif
