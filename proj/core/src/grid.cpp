#include "splatbake/grid.hpp"

#include <algorithm>
#include <ostream>

#include "splatbake/error.hpp"
#include "splatbake/threading.hpp"

namespace splatbake {

int grid_cells_per_axis(size_t target_pixel_count) {
    if (target_pixel_count == 0)
        throw Error(ErrorKind::InvalidValue, "target pixel count must be positive");
    // Start from the float cbrt and correct so the result is the exact
    // smallest n with n^3 >= count.
    auto cube = [](uint64_t k) { return k * k * k; };
    uint64_t n = static_cast<uint64_t>(std::cbrt(static_cast<double>(target_pixel_count)));
    if (n == 0)
        n = 1;
    while (cube(n) < target_pixel_count)
        ++n;
    while (n > 1 && cube(n - 1) >= target_pixel_count)
        --n;
    return static_cast<int>(n);
}

float grid_cell_size(const Box3& bounds, size_t target_pixel_count) {
    const int n = grid_cells_per_axis(target_pixel_count);
    float side = bounds.max_extent() * (1.0f + 1e-6f);
    if (!(side > 0.0f))
        side = 1e-6f;
    return side / static_cast<float>(n);
}

SpatialGrid build_grid(const SplatCloud& cloud, size_t target_pixel_count, int threads) {
    if (cloud.empty())
        throw Error(ErrorKind::EmptyCloud, "cannot build a grid from an empty cloud");
    if (cloud.aabb_lo[0].size() != cloud.size())
        throw Error(ErrorKind::InvalidValue, "cloud not finalized before grid build");

    SpatialGrid g;
    const int n = grid_cells_per_axis(target_pixel_count);
    g.dims = {n, n, n};
    g.cell_size = grid_cell_size(cloud.bounds, target_pixel_count);
    const float side = g.cell_size * static_cast<float>(n);
    const Vec3 c = cloud.bounds.center();
    g.origin = {c.x - side * 0.5f, c.y - side * 0.5f, c.z - side * 0.5f};
    g.splat_count = cloud.size();

    const size_t cells = static_cast<size_t>(n) * n * n;
    g.offsets.assign(cells + 1, 0);

    auto axis_range = [&](int axis, size_t s, int& lo, int& hi) {
        lo = grid_cell_axis(cloud.aabb_lo[axis][s], g.origin[axis], g.cell_size, n);
        hi = grid_cell_axis(cloud.aabb_hi[axis][s], g.origin[axis], g.cell_size, n);
    };

    // Both passes partition cells by z-slab; every worker walks the full
    // splat list in id order, so each cell's list comes out ascending and
    // identical for any worker count.
    parallel_chunks(static_cast<size_t>(n), threads, [&](size_t z0, size_t z1, int) {
        for (size_t s = 0; s < cloud.size(); ++s) {
            int xlo, xhi, ylo, yhi, zlo, zhi;
            axis_range(2, s, zlo, zhi);
            zlo = std::max(zlo, static_cast<int>(z0));
            zhi = std::min(zhi, static_cast<int>(z1) - 1);
            if (zlo > zhi)
                continue;
            axis_range(0, s, xlo, xhi);
            axis_range(1, s, ylo, yhi);
            for (int z = zlo; z <= zhi; ++z)
                for (int y = ylo; y <= yhi; ++y)
                    for (int x = xlo; x <= xhi; ++x)
                        ++g.offsets[g.cell_index(x, y, z) + 1];
        }
    });

    for (size_t i = 0; i < cells; ++i)
        g.offsets[i + 1] += g.offsets[i];
    g.ids.resize(g.offsets.back());

    std::vector<uint32_t> cursor(g.offsets.begin(), g.offsets.end() - 1);
    parallel_chunks(static_cast<size_t>(n), threads, [&](size_t z0, size_t z1, int) {
        for (size_t s = 0; s < cloud.size(); ++s) {
            int xlo, xhi, ylo, yhi, zlo, zhi;
            axis_range(2, s, zlo, zhi);
            zlo = std::max(zlo, static_cast<int>(z0));
            zhi = std::min(zhi, static_cast<int>(z1) - 1);
            if (zlo > zhi)
                continue;
            axis_range(0, s, xlo, xhi);
            axis_range(1, s, ylo, yhi);
            for (int z = zlo; z <= zhi; ++z)
                for (int y = ylo; y <= yhi; ++y)
                    for (int x = xlo; x <= xhi; ++x)
                        g.ids[cursor[g.cell_index(x, y, z)]++] = static_cast<uint32_t>(s);
        }
    });

    return g;
}

void dump_grid(const SpatialGrid& g, std::ostream& os) {
    for (int z = 0; z < g.dims[2]; ++z)
        for (int y = 0; y < g.dims[1]; ++y)
            for (int x = 0; x < g.dims[0]; ++x) {
                const size_t c = g.cell_index(x, y, z);
                if (g.offsets[c] == g.offsets[c + 1])
                    continue;
                os << "cell " << x << ' ' << y << ' ' << z << ':';
                for (uint32_t i = g.offsets[c]; i < g.offsets[c + 1]; ++i)
                    os << (i == g.offsets[c] ? ' ' : ',') << g.ids[i];
                os << '\n';
            }
}

} // namespace splatbake
