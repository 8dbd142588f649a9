#include "splatbake/project.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>

#include "splatbake/error.hpp"
#include "splatbake/threading.hpp"
#include "project_impl.hpp"

namespace splatbake {

namespace detail {

bool contribution_core(const RayCtx& ray, const GaussianSplat& splat, const Mat3& frame,
                       Contribution& out) {
    const float cosine = dot(splat.normal, ray.dir);
    if (cosine <= ray.tau)
        return false;

    // Ray in the splat's local frame, axes scaled to unit sigma. The ray
    // parameter is shared between model and local space, so t stays in
    // model units.
    Vec3 ol = frame.mul_transposed(ray.origin - splat.position);
    Vec3 dl = frame.mul_transposed(ray.dir);
    ol = {ol.x / splat.scale.x, ol.y / splat.scale.y, ol.z / splat.scale.z};
    dl = {dl.x / splat.scale.x, dl.y / splat.scale.y, dl.z / splat.scale.z};

    const float dd = dot(dl, dl);
    const float t = -dot(ol, dl) / dd;
    const Vec3 closest = ol + dl * t;
    const float d2 = dot(closest, closest);
    if (d2 > ray.sigma_cut * ray.sigma_cut)
        return false;

    const float t_pad = 3.0f * std::max({splat.scale.x, splat.scale.y, splat.scale.z});
    if (t < -t_pad || t > ray.t_max)
        return false;

    out.splat_id = splat.id;
    out.t = t;
    out.alpha_eff = std::clamp(splat.opacity * std::exp(-0.5f * d2) * cosine, 0.0f, 1.0f);
    out.color = splat.color;
    return true;
}

namespace {

uint8_t to_byte(float v) {
    v = std::clamp(v, 0.0f, 1.0f);
    return static_cast<uint8_t>(v * 255.0f + 0.5f);
}

} // namespace

RGBA8 evaluate_texel(std::span<const uint32_t> ids, const SplatCloud& cloud, const RayCtx& ray,
                     float stop_transmittance, RGBA8 fallback, bool& covered,
                     std::vector<Contribution>& scratch) {
    scratch.clear();
    Contribution c;
    for (uint32_t id : ids)
        if (contribution_core(ray, cloud.splats[id], cloud.frames[id], c))
            scratch.push_back(c);

    std::sort(scratch.begin(), scratch.end(), [](const Contribution& a, const Contribution& b) {
        return a.t != b.t ? a.t < b.t : a.splat_id < b.splat_id;
    });

    float T = 1.0f;
    float A = 0.0f;
    Vec3 C;
    for (const Contribution& k : scratch) {
        C += k.color * (T * k.alpha_eff);
        A += T * k.alpha_eff;
        T *= 1.0f - k.alpha_eff;
        if (T < stop_transmittance)
            break;
    }

    covered = A > 1e-4f;
    if (!covered)
        return fallback;
    return {to_byte(C.x / A), to_byte(C.y / A), to_byte(C.z / A), 255};
}

} // namespace detail

std::optional<Contribution> ray_gaussian_weight(const Vec3& origin, const Vec3& dir,
                                                const GaussianSplat& splat,
                                                const ProjectionParams& params) {
    if (!params.t_max)
        throw Error(ErrorKind::InvalidValue, "ray_gaussian_weight needs a resolved t_max");
    detail::RayCtx ray{origin, dir, params.tau, params.sigma_cut, *params.t_max};
    const Mat3 frame = splat.orientation.to_mat3();
    Contribution out;
    if (!detail::contribution_core(ray, splat, frame, out))
        return std::nullopt;
    return out;
}

ProjectResult project_texture(const SpatialGrid& grid, const SplatCloud& cloud,
                              const ProjectionMap& pmap, const ProjectionParams& params,
                              int threads) {
    if (grid.splat_count != cloud.size())
        throw Error(ErrorKind::GridCloudMismatch, "grid was not built from this cloud");
    if (pmap.width <= 0 || pmap.height <= 0)
        throw Error(ErrorKind::InvalidValue, "empty projection map");

    const float t_max = params.t_max.value_or(cell_diagonal(grid));
    if (!(t_max > 0.0f) || !std::isfinite(t_max))
        throw Error(ErrorKind::InvalidValue, "t_max must be positive");
    const float seg_pad = 1e-4f * (t_max + 3.0f * cloud.max_scale);

    ProjectResult res;
    res.texture = Texture::solid(pmap.width, pmap.height, params.fallback);

    std::atomic<size_t> covered_total{0};
    parallel_chunks(static_cast<size_t>(pmap.height), threads, [&](size_t y0, size_t y1, int) {
        std::vector<Contribution> scratch;
        std::vector<uint32_t> cand;
        size_t covered_local = 0;

        for (size_t y = y0; y < y1; ++y) {
            for (int x = 0; x < pmap.width; ++x) {
                const ProjTexel& tx = pmap.at(x, static_cast<int>(y));
                if (!tx.valid)
                    continue;
                detail::RayCtx ray{tx.position, tx.normal, params.tau, params.sigma_cut, t_max};

                std::span<const uint32_t> ids;
                if (params.traversal == Traversal::SingleCell) {
                    ids = query_cell(grid, tx.position);
                } else {
                    // Union of the cells overlapped by the ray segment's box.
                    // Any contributor's closest point lies on the segment, so
                    // its 3-sigma box overlaps one of these cells; the extra
                    // splats swept in evaluate to nothing.
                    cand.clear();
                    const Vec3 a = tx.position - tx.normal * (3.0f * cloud.max_scale);
                    const Vec3 b = tx.position + tx.normal * t_max;
                    const Vec3 m{seg_pad, seg_pad, seg_pad};
                    const auto clo = grid_cell_coord(grid, min(a, b) - m);
                    const auto chi = grid_cell_coord(grid, max(a, b) + m);
                    for (int z = clo[2]; z <= chi[2]; ++z)
                        for (int cy = clo[1]; cy <= chi[1]; ++cy)
                            for (int cx = clo[0]; cx <= chi[0]; ++cx) {
                                const size_t c = grid.cell_index(cx, cy, z);
                                cand.insert(cand.end(), grid.ids.begin() + grid.offsets[c],
                                            grid.ids.begin() + grid.offsets[c + 1]);
                            }
                    std::sort(cand.begin(), cand.end());
                    cand.erase(std::unique(cand.begin(), cand.end()), cand.end());
                    ids = cand;
                }

                bool covered = false;
                const RGBA8 rgba = detail::evaluate_texel(ids, cloud, ray, params.stop_transmittance,
                                                          params.fallback, covered, scratch);
                res.texture.set(x, static_cast<int>(y), rgba);
                if (covered)
                    ++covered_local;
            }
        }
        covered_total.fetch_add(covered_local, std::memory_order_relaxed);
    });

    res.coverage = pmap.valid_count == 0
                       ? 0.0f
                       : static_cast<float>(covered_total.load()) / static_cast<float>(pmap.valid_count);
    return res;
}

} // namespace splatbake
