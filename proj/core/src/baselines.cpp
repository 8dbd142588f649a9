#include "splatbake/baselines.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>

#include "splatbake/error.hpp"
#include "splatbake/grid.hpp"
#include "splatbake/threading.hpp"
#include "project_impl.hpp"

namespace splatbake {

namespace {

constexpr size_t kBlock = 1024; // splats per flag block (keeps flags in L1)

// Ids of splats whose 3-sigma box overlaps the box [blo, bhi] (ascending);
// a necessary condition for contributing along the segment, so skipping the
// rest never changes the result. Every splat in the cloud is tested — this
// is the brute-force oracle, the flag pass just keeps the scan vectorizable.
void collect_box_candidates(const SplatCloud& cloud, const Vec3& blo, const Vec3& bhi,
                            std::vector<uint8_t>& flags, std::vector<uint32_t>& out) {
    out.clear();
    const float* lox = cloud.aabb_lo[0].data();
    const float* loy = cloud.aabb_lo[1].data();
    const float* loz = cloud.aabb_lo[2].data();
    const float* hix = cloud.aabb_hi[0].data();
    const float* hiy = cloud.aabb_hi[1].data();
    const float* hiz = cloud.aabb_hi[2].data();

    for (size_t b = 0; b < cloud.size(); b += kBlock) {
        const size_t e = std::min(b + kBlock, cloud.size());
        for (size_t i = b; i < e; ++i)
            flags[i - b] = static_cast<uint8_t>(lox[i] <= bhi.x) & static_cast<uint8_t>(blo.x <= hix[i]) &
                           static_cast<uint8_t>(loy[i] <= bhi.y) & static_cast<uint8_t>(blo.y <= hiy[i]) &
                           static_cast<uint8_t>(loz[i] <= bhi.z) & static_cast<uint8_t>(blo.z <= hiz[i]);
        for (size_t i = b; i < e; ++i)
            if (flags[i - b])
                out.push_back(static_cast<uint32_t>(i));
    }
}

} // namespace

ProjectResult project_global(const SplatCloud& cloud, const ProjectionMap& pmap,
                             const ProjectionParams& params, int threads) {
    if (cloud.empty())
        throw Error(ErrorKind::EmptyCloud, "cannot project an empty cloud");
    if (cloud.frames.size() != cloud.size())
        throw Error(ErrorKind::InvalidValue, "cloud not finalized before projection");
    if (pmap.width <= 0 || pmap.height <= 0)
        throw Error(ErrorKind::InvalidValue, "empty projection map");

    const size_t pixels = static_cast<size_t>(pmap.width) * static_cast<size_t>(pmap.height);
    const float t_max =
        params.t_max.value_or(grid_cell_size(cloud.bounds, pixels) * std::sqrt(3.0f));
    if (!(t_max > 0.0f) || !std::isfinite(t_max))
        throw Error(ErrorKind::InvalidValue, "t_max must be positive");

    const float seg_pad = 1e-4f * (t_max + 3.0f * cloud.max_scale);

    ProjectResult res;
    res.texture = Texture::solid(pmap.width, pmap.height, params.fallback);

    std::atomic<size_t> covered_total{0};
    parallel_chunks(static_cast<size_t>(pmap.height), threads, [&](size_t y0, size_t y1, int) {
        std::vector<Contribution> scratch;
        std::vector<uint32_t> cand;
        std::vector<uint8_t> flags(kBlock);
        size_t covered_local = 0;

        for (size_t y = y0; y < y1; ++y) {
            for (int x = 0; x < pmap.width; ++x) {
                const ProjTexel& tx = pmap.at(x, static_cast<int>(y));
                if (!tx.valid)
                    continue;
                detail::RayCtx ray{tx.position, tx.normal, params.tau, params.sigma_cut, t_max};

                // Candidates are the whole cloud; the box pass only skips
                // splats that cannot touch the ray segment, so it never
                // changes the result. Padding absorbs rounding in the
                // segment endpoints.
                const Vec3 a = tx.position - tx.normal * (3.0f * cloud.max_scale);
                const Vec3 b = tx.position + tx.normal * t_max;
                const Vec3 m{seg_pad, seg_pad, seg_pad};
                collect_box_candidates(cloud, min(a, b) - m, max(a, b) + m, flags, cand);

                bool covered = false;
                const RGBA8 rgba = detail::evaluate_texel(cand, cloud, ray, params.stop_transmittance,
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

ProjectResult project_per_face(const Mesh& source_mesh, const Texture& source_texture,
                               const ProjectionMap& pmap, float max_angle_deg,
                               std::optional<float> max_dist, RGBA8 fallback, int threads) {
    if (source_mesh.triangles.empty())
        throw Error(ErrorKind::EmptyMesh, "per-face projection needs a source mesh");
    if (source_texture.width <= 0 || source_texture.height <= 0)
        throw Error(ErrorKind::InvalidValue, "source texture is empty");
    if (pmap.width <= 0 || pmap.height <= 0)
        throw Error(ErrorKind::InvalidValue, "empty projection map");

    const float dist_cap = max_dist.value_or(0.05f * source_mesh.bounds().diagonal());
    if (!(dist_cap > 0.0f) || !std::isfinite(dist_cap))
        throw Error(ErrorKind::InvalidValue, "max_dist must be positive");
    const float cos_min = std::cos(max_angle_deg * 3.14159265358979323846f / 180.0f);

    struct Face {
        Vec3 p0, e1, e2, normal;
        float d00, d01, d11, inv_denom;
        Vec2 uv0, uv1, uv2;
        bool usable;
    };
    std::vector<Face> faces(source_mesh.triangles.size());
    for (size_t t = 0; t < faces.size(); ++t) {
        const TriangleRef& tr = source_mesh.triangles[t];
        Face& f = faces[t];
        f.p0 = source_mesh.positions[tr.pos[0]];
        f.e1 = source_mesh.positions[tr.pos[1]] - f.p0;
        f.e2 = source_mesh.positions[tr.pos[2]] - f.p0;
        const Vec3 c = cross(f.e1, f.e2);
        const float clen = length(c);
        f.d00 = dot(f.e1, f.e1);
        f.d01 = dot(f.e1, f.e2);
        f.d11 = dot(f.e2, f.e2);
        const float denom = f.d00 * f.d11 - f.d01 * f.d01;
        f.usable = clen > 1e-20f && denom > 0.0f;
        if (f.usable) {
            f.normal = c / clen;
            f.inv_denom = 1.0f / denom;
        }
        f.uv0 = source_mesh.uvs[tr.uv[0]];
        f.uv1 = source_mesh.uvs[tr.uv[1]];
        f.uv2 = source_mesh.uvs[tr.uv[2]];
    }

    ProjectResult res;
    res.texture = Texture::solid(pmap.width, pmap.height, fallback);

    auto to_byte = [](float v) {
        v = std::clamp(v, 0.0f, 1.0f);
        return static_cast<uint8_t>(v * 255.0f + 0.5f);
    };

    std::atomic<size_t> covered_total{0};
    parallel_chunks(static_cast<size_t>(pmap.height), threads, [&](size_t y0, size_t y1, int) {
        size_t covered_local = 0;
        for (size_t y = y0; y < y1; ++y) {
            for (int x = 0; x < pmap.width; ++x) {
                const ProjTexel& tx = pmap.at(x, static_cast<int>(y));
                if (!tx.valid)
                    continue;

                float best_dist = dist_cap;
                bool found = false;
                Vec2 best_uv;
                for (const Face& f : faces) {
                    if (!f.usable || dot(f.normal, tx.normal) < cos_min)
                        continue;
                    const float signed_d = dot(f.normal, tx.position - f.p0);
                    const float ad = std::abs(signed_d);
                    // "ties to the lowest face index": later faces must win
                    // strictly, and the cap itself is inclusive.
                    if (ad > best_dist || (found && ad == best_dist))
                        continue;
                    const Vec3 v2 = (tx.position - f.normal * signed_d) - f.p0;
                    const float d20 = dot(v2, f.e1);
                    const float d21 = dot(v2, f.e2);
                    const float b1 = (f.d11 * d20 - f.d01 * d21) * f.inv_denom;
                    const float b2 = (f.d00 * d21 - f.d01 * d20) * f.inv_denom;
                    const float b0 = 1.0f - b1 - b2;
                    if (b0 < 0.0f || b1 < 0.0f || b2 < 0.0f)
                        continue;
                    best_dist = ad;
                    found = true;
                    best_uv = f.uv0 * b0 + f.uv1 * b1 + f.uv2 * b2;
                }

                if (found) {
                    const Vec4 s = bilinear_sample(source_texture, best_uv.x, best_uv.y);
                    res.texture.set(x, static_cast<int>(y), {to_byte(s.x), to_byte(s.y), to_byte(s.z), 255});
                    ++covered_local;
                }
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
