#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "splatbake/geometry.hpp"

namespace splatbake {

struct ProjTexel {
    Vec3 position;
    Vec3 normal;
    uint8_t valid = 0;
};

/// UV-space projection map: per texel, the interpolated surface point and
/// normal of the target mesh, or valid == 0 where no triangle covers the
/// texel center. Invalid texels keep zeroed position/normal.
struct ProjectionMap {
    int width = 0;
    int height = 0;
    std::vector<ProjTexel> texels; // row-major, row 0 at the image top
    size_t valid_count = 0;

    ProjTexel& at(int x, int y) { return texels[static_cast<size_t>(y) * width + x]; }
    const ProjTexel& at(int x, int y) const { return texels[static_cast<size_t>(y) * width + x]; }
};

/// Rasterize the mesh's UV layout into a projection map. Texel (x, y)
/// samples UV (x+0.5)/W, 1-(y+0.5)/H; overlapping charts resolve to the
/// lowest triangle index. Throws NoCoverage when no texel is covered.
/// Result is byte-identical for any thread count.
ProjectionMap rasterize_projection_map(const Mesh& mesh, int width, int height, int threads = 1);

/// Binary projection-map cache: magic "PMAP", u32 width, u32 height, then
/// per texel u8 valid + 6 f32 (position, normal), little-endian.
void write_pmap(const ProjectionMap& map, std::ostream& os);
ProjectionMap read_pmap(std::istream& is);

void save_pmap(const ProjectionMap& map, const std::string& path);
ProjectionMap load_pmap(const std::string& path);

} // namespace splatbake
