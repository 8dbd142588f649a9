#pragma once

#include <cstdint>
#include <optional>

#include "splatbake/grid.hpp"
#include "splatbake/image.hpp"
#include "splatbake/raster.hpp"
#include "splatbake/splat.hpp"

namespace splatbake {

enum class Traversal {
    SingleCell, // candidates from the texel's own cell only
    Dda,        // candidates from every cell the ray segment's box touches
};

struct ProjectionParams {
    float tau = 0.0f;              // alignment cosine threshold
    std::optional<float> t_max;    // nullopt = AUTO: the grid's cell diagonal
    float sigma_cut = 3.0f;        // Mahalanobis acceptance radius
    float stop_transmittance = 1e-3f;
    RGBA8 fallback{0, 0, 0, 0};
    Traversal traversal = Traversal::SingleCell;
};

struct Contribution {
    uint32_t splat_id = 0;
    float t = 0.0f;         // signed ray parameter, model units
    float alpha_eff = 0.0f; // in [0,1]
    Vec3 color;
};

/// Test one splat against the ray (origin, unit dir). Returns nothing when
/// the splat fails the alignment filter (dot(normal, dir) <= tau), lies
/// beyond sigma_cut in Mahalanobis distance, or its closest approach t*
/// falls outside [-3*max(scale), t_max]. Otherwise alpha_eff =
/// opacity * exp(-d^2/2) * cosine, clamped to [0,1]. params.t_max must be
/// resolved (engaged) for this overload.
std::optional<Contribution> ray_gaussian_weight(const Vec3& origin, const Vec3& dir,
                                                const GaussianSplat& splat,
                                                const ProjectionParams& params);

struct ProjectResult {
    Texture texture;
    float coverage = 0.0f; // covered / valid texels
};

/// Bake the cloud into the target's UV space: per valid texel, gather
/// candidates from the grid (the texel's own cell, or with DDA the cells
/// along the ray segment), weight them along the normal ray, sort by (t, id)
/// and composite front-to-back; covered texels get (C/A, alpha 255),
/// everything else the fallback color. Output is byte-identical for any
/// thread count.
ProjectResult project_texture(const SpatialGrid& grid, const SplatCloud& cloud,
                              const ProjectionMap& pmap, const ProjectionParams& params = {},
                              int threads = 1);

} // namespace splatbake
