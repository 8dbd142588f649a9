#pragma once

#include <optional>

#include "splatbake/geometry.hpp"
#include "splatbake/image.hpp"
#include "splatbake/project.hpp"
#include "splatbake/raster.hpp"
#include "splatbake/splat.hpp"

namespace splatbake {

/// Gridless ray-cast baseline: identical contract and output bytes to
/// project_texture, but candidates come from scanning the whole cloud
/// instead of a grid cell. AUTO t_max resolves against the grid geometry a
/// pmap-sized build would use, so both paths see the same value. Runtime is
/// O(texels * splats); this is the correctness oracle and the slow
/// comparison point, not a production path.
ProjectResult project_global(const SplatCloud& cloud, const ProjectionMap& pmap,
                             const ProjectionParams& params = {}, int threads = 1);

/// Per-face projection baseline: for each valid texel, scan all source
/// triangles, keep faces within max_angle_deg of the texel normal, project
/// the texel position onto each face plane and take the nearest face whose
/// foot lies inside it (ties to the lowest face index) within max_dist;
/// sample the source texture at the foot's UV. max_dist defaults to 5% of
/// the source mesh's bounding-box diagonal.
ProjectResult project_per_face(const Mesh& source_mesh, const Texture& source_texture,
                               const ProjectionMap& pmap, float max_angle_deg = 60.0f,
                               std::optional<float> max_dist = std::nullopt,
                               RGBA8 fallback = RGBA8{0, 0, 0, 0}, int threads = 1);

} // namespace splatbake
