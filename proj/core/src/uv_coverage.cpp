#include "uv_coverage.hpp"

#include <algorithm>
#include <cmath>

#include "splatbake/threading.hpp"

namespace splatbake::detail {

std::vector<CoverageSample> compute_uv_coverage(const Mesh& mesh, int width, int height, int threads) {
    std::vector<CoverageSample> out(static_cast<size_t>(width) * static_cast<size_t>(height));

    const float w = static_cast<float>(width);
    const float h = static_cast<float>(height);

    // Row bands; every band walks the full triangle list in index order, so
    // the first (lowest-index) triangle claims contested texels no matter
    // how the rows are split.
    parallel_chunks(static_cast<size_t>(height), threads, [&](size_t row_begin, size_t row_end, int) {
        const int y_begin = static_cast<int>(row_begin);
        const int y_end = static_cast<int>(row_end);
        for (size_t t = 0; t < mesh.triangles.size(); ++t) {
            const TriangleRef& tr = mesh.triangles[t];
            const Vec2 a = mesh.uvs[tr.uv[0]];
            const Vec2 b = mesh.uvs[tr.uv[1]];
            const Vec2 c = mesh.uvs[tr.uv[2]];
            if (cross(b - a, c - a) == 0.0f)
                continue;

            const float umin = std::min({a.x, b.x, c.x});
            const float umax = std::max({a.x, b.x, c.x});
            const float vmin = std::min({a.y, b.y, c.y});
            const float vmax = std::max({a.y, b.y, c.y});

            // Texel index ranges from the UV bounding box, padded one texel
            // so float rounding never drops an edge case; the exact
            // barycentric test below decides.
            int y_lo = static_cast<int>(std::floor(h - vmax * h - 0.5f)) - 1;
            int y_hi = static_cast<int>(std::ceil(h - vmin * h - 0.5f)) + 1;
            int x_lo = static_cast<int>(std::floor(umin * w - 0.5f)) - 1;
            int x_hi = static_cast<int>(std::ceil(umax * w - 0.5f)) + 1;
            y_lo = std::max(y_lo, y_begin);
            y_hi = std::min(y_hi, y_end - 1);
            x_lo = std::max(x_lo, 0);
            x_hi = std::min(x_hi, width - 1);

            for (int y = y_lo; y <= y_hi; ++y) {
                CoverageSample* row = out.data() + static_cast<size_t>(y) * width;
                for (int x = x_lo; x <= x_hi; ++x) {
                    if (row[x].tri >= 0)
                        continue;
                    const Barycentric bc = barycentric_uv(a, b, c, texel_center_uv(x, y, width, height));
                    if (bc.inside())
                        row[x] = {static_cast<int32_t>(t), bc};
                }
            }
        }
    });

    return out;
}

} // namespace splatbake::detail
