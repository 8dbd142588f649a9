#pragma once

#include <cstdint>
#include <vector>

#include "splatbake/geometry.hpp"

namespace splatbake::detail {

struct CoverageSample {
    int32_t tri = -1; // -1: no triangle covers this texel center
    Barycentric bary;
};

/// Rasterize all mesh triangles over a width x height texel grid in UV
/// space. Texel (x, y) has center u = (x+0.5)/W, v = 1-(y+0.5)/H (row 0 is
/// the image top). Inside test is the closed barycentric test; texels
/// claimed by several triangles keep the lowest triangle index. Zero-area
/// UV triangles are skipped. Output is row-major and independent of the
/// thread count.
std::vector<CoverageSample> compute_uv_coverage(const Mesh& mesh, int width, int height, int threads);

inline Vec2 texel_center_uv(int x, int y, int width, int height) {
    return {(static_cast<float>(x) + 0.5f) / static_cast<float>(width),
            (static_cast<float>(height - y) - 0.5f) / static_cast<float>(height)};
}

} // namespace splatbake::detail
