#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "splatbake/splat.hpp"

namespace splatbake {

/// Uniform grid over the cloud's bounds (padded to a cube). Each cell lists
/// the ids of every splat whose 3-sigma AABB overlaps it, ascending. Cells
/// are half-open boxes [origin + i*cell_size, origin + (i+1)*cell_size).
struct SpatialGrid {
    Vec3 origin;
    float cell_size = 0.0f;
    std::array<int, 3> dims{0, 0, 0}; // nx == ny == nz by construction
    size_t splat_count = 0;

    // CSR cell storage: cell c holds ids[offsets[c] .. offsets[c+1]).
    std::vector<uint32_t> offsets;
    std::vector<uint32_t> ids;

    size_t cell_index(int x, int y, int z) const {
        return (static_cast<size_t>(z) * dims[1] + static_cast<size_t>(y)) * dims[0] +
               static_cast<size_t>(x);
    }
};

/// Cells per axis for a target pixel count: ceil(cbrt(n)), computed
/// integer-exactly (so 64^2 -> 16, 256^2 -> 41, 1024^2 -> 102).
int grid_cells_per_axis(size_t target_pixel_count);

/// Cell edge length for a cloud with the given bounds: the bounds' max
/// extent (inflated by 1e-6 so the cube strictly covers them) divided by
/// the per-axis cell count.
float grid_cell_size(const Box3& bounds, size_t target_pixel_count);

/// Shared cell arithmetic for insertion and queries: floor((p - o)/cs)
/// clamped into [0, n). Using one definition on both sides makes
/// query_cell(p) land inside every inserted range that contains p.
inline int grid_cell_axis(float p, float origin, float cell_size, int n) {
    int c = static_cast<int>(std::floor((p - origin) / cell_size));
    return c < 0 ? 0 : (c >= n ? n - 1 : c);
}

inline std::array<int, 3> grid_cell_coord(const SpatialGrid& g, const Vec3& p) {
    return {grid_cell_axis(p.x, g.origin.x, g.cell_size, g.dims[0]),
            grid_cell_axis(p.y, g.origin.y, g.cell_size, g.dims[1]),
            grid_cell_axis(p.z, g.origin.z, g.cell_size, g.dims[2])};
}

/// Build the grid: dims from the cube-root rule, each splat inserted into
/// all cells overlapped by its 3-sigma AABB. Deterministic for any thread
/// count. Throws EmptyCloud / InvalidValue.
SpatialGrid build_grid(const SplatCloud& cloud, size_t target_pixel_count, int threads = 1);

/// Ids of the cell containing the position (outside positions clamp to the
/// boundary cell), ascending.
inline std::span<const uint32_t> query_cell(const SpatialGrid& g, const Vec3& p) {
    const auto c = grid_cell_coord(g, p);
    const size_t i = g.cell_index(c[0], c[1], c[2]);
    return {g.ids.data() + g.offsets[i], g.ids.data() + g.offsets[i + 1]};
}

inline float cell_diagonal(const SpatialGrid& g) {
    return g.cell_size * std::sqrt(3.0f);
}

/// Debug dump, one line per non-empty cell: "cell ix iy iz: id,id,...".
void dump_grid(const SpatialGrid& g, std::ostream& os);

} // namespace splatbake
