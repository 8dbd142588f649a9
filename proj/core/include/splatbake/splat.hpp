#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "splatbake/geometry.hpp"
#include "splatbake/image.hpp"

namespace splatbake {

struct GaussianSplat {
    Vec3 position;
    Vec3 normal;      // unit
    Vec3 scale;       // sigma along the local (tangent-u, tangent-v, normal) axes, > 0
    Quat orientation; // rotates local axes into model space
    Vec3 color;       // linear RGB in [0,1]
    float opacity = 1.0f;
    uint32_t id = 0;  // == index in its cloud
};

/// Axis-aligned box enclosing the splat's 3-sigma ellipsoid.
Box3 splat_aabb(const GaussianSplat& s);

struct SplatCloud {
    std::vector<GaussianSplat> splats;
    Box3 bounds; // contains every splat's 3-sigma box

    size_t size() const { return splats.size(); }
    bool empty() const { return splats.empty(); }

    /// Recompute bounds and the cached per-splat data below. Must be called
    /// after any mutation of `splats`; throws InvalidValue if ids are not
    /// dense 0..N-1 or a scale component is not positive and finite.
    void finalize();

    // Cached by finalize(); SoA so the reach prefilter vectorizes.
    std::array<std::vector<float>, 3> aabb_lo;
    std::array<std::vector<float>, 3> aabb_hi;
    std::vector<Mat3> frames; // orientation as a matrix, columns = local axes
    float max_scale = 0.0f;   // max scale component over the cloud

    /// True when p lies inside splat `id`'s 3-sigma box.
    bool in_reach(uint32_t id, const Vec3& p) const {
        return p.x >= aabb_lo[0][id] && p.x <= aabb_hi[0][id] && p.y >= aabb_lo[1][id] &&
               p.y <= aabb_hi[1][id] && p.z >= aabb_lo[2][id] && p.z <= aabb_hi[2][id];
    }
};

/// Convert a textured mesh into one splat per covered UV sample on a
/// (W*supersample) x (H*supersample) grid, W x H being the texture size.
/// Splats are emitted in row-major sample order; sigma is a quarter of the
/// surface distance spanned by one sample step, the normal sigma 10% of the
/// smaller tangent sigma. Throws EmptyCloud when the UV layout covers no
/// sample. Output is independent of the thread count.
SplatCloud splats_from_mesh(const Mesh& mesh, const Texture& texture, int supersample = 1,
                            int threads = 1);

struct DensifyResult {
    SplatCloud cloud;
    int passes = 0;        // insertion passes actually run
    bool hit_pass_cap = false;
    float max_gap = 0.0f;  // final max nearest-neighbor distance
    size_t inserted = 0;
};

/// Insert midpoint splats between nearest-neighbor pairs farther apart than
/// `spacing`, repeating until no gap exceeds it or `max_passes` is reached.
/// Pairs are deduplicated per pass; inserted splats average their parents
/// (scale takes the component-wise max). Deterministic.
DensifyResult densify(const SplatCloud& cloud, float spacing, int max_passes = 24);

/// Median nearest-neighbor distance between splat positions (0 when the
/// cloud has fewer than two splats).
float median_nn_distance(const SplatCloud& cloud);

/// All nearest-neighbor distances, indexed by splat id (infinity for a
/// lone splat).
std::vector<float> nn_distances(const std::vector<Vec3>& points);

/// One vertex record of a binary 3DGS PLY, in canonical property order:
/// x y z nx ny nz f_dc_0..2 opacity scale_0..2 rot_0..3.
using RawSplatRecord = std::array<float, 17>;

/// Parse a binary little-endian 3DGS PLY. Colors decode as
/// 0.5 + 0.2820947918 * f_dc (clamped to [0,1]), opacity through the
/// logistic, scales through exp; rot is (w, x, y, z) and is normalized.
/// When `raw_out` is given it receives the undecoded records in file order.
SplatCloud parse_splat_ply(std::istream& is, std::vector<RawSplatRecord>* raw_out = nullptr);
SplatCloud load_splat_ply(const std::string& path, std::vector<RawSplatRecord>* raw_out = nullptr);

/// Write a canonical-header binary PLY from decoded splats (inverse of the
/// parse decode; opacity is clamped away from {0,1} before the logit).
void serialize_splat_ply(const SplatCloud& cloud, std::ostream& os);

/// Write raw records verbatim under the canonical header. Parsing the
/// result yields the same bytes back: a bit-exact round-trip.
void serialize_splat_ply_raw(const std::vector<RawSplatRecord>& records, std::ostream& os);

void save_splat_ply(const SplatCloud& cloud, const std::string& path);

} // namespace splatbake
