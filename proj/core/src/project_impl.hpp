#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "splatbake/project.hpp"
#include "splatbake/splat.hpp"

// Shared texel evaluation used by both the grid path and the gridless
// baseline. Both paths must run the exact same floating-point code on the
// same candidate sets for their outputs to be byte-identical, so the
// functions live in one translation unit (project.cpp) and are only
// declared here.
namespace splatbake::detail {

struct RayCtx {
    Vec3 origin;
    Vec3 dir;
    float tau = 0.0f;
    float sigma_cut = 3.0f;
    float t_max = 0.0f;
};

/// ray_gaussian_weight against one splat with a precomputed rotation
/// frame. Returns false for NONE.
bool contribution_core(const RayCtx& ray, const GaussianSplat& splat, const Mat3& frame,
                       Contribution& out);

/// Evaluate one texel: weight the candidates (ids must be ascending and
/// unique), sort contributions by (t, id), composite front-to-back and
/// quantize. `covered` reports A > 1e-4. Scratch avoids reallocation.
RGBA8 evaluate_texel(std::span<const uint32_t> ids, const SplatCloud& cloud, const RayCtx& ray,
                     float stop_transmittance, RGBA8 fallback, bool& covered,
                     std::vector<Contribution>& scratch);

} // namespace splatbake::detail
