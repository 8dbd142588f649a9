#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <vector>

#include "splatbake/baselines.hpp"
#include "splatbake/geometry.hpp"
#include "splatbake/image.hpp"
#include "splatbake/project.hpp"
#include "splatbake/raster.hpp"
#include "splatbake/splat.hpp"

namespace splatbake {

struct SimilarityReport {
    float similarity = 0.0f;      // fraction of compared texels within 2/255
    float mean_abs_error = 0.0f;  // per-channel mean over RGB, in [0,1]
    size_t compared_texels = 0;
};

/// Compare textures over the mask's valid texels on the RGB channels: a
/// texel matches when its max per-channel byte difference is <= 2.
/// Throws DimensionMismatch unless a, b and mask share dimensions.
SimilarityReport similarity(const Texture& a, const Texture& b, const ProjectionMap& mask);

enum class Method { Grid, Global, PerFace };

/// Exactly one source: (mesh + texture) or a pre-parsed splat cloud.
struct SourceData {
    const Mesh* mesh = nullptr;
    const Texture* texture = nullptr;
    const SplatCloud* cloud = nullptr;
};

struct PipelineOptions {
    Method method = Method::Grid;
    int size = 1024; // output texture is size x size
    int threads = 1;
    int supersample = 1;
    ProjectionParams params;
    // Densification: an explicit spacing wins; otherwise AUTO (1.5x the
    // median nearest-neighbor distance) when requested or when the source
    // is a splat cloud; mesh-generated clouds are already uniform and skip
    // it by default.
    std::optional<float> densify_spacing;
    bool densify_auto = false;
    // Per-face baseline knobs.
    float max_angle_deg = 60.0f;
    std::optional<float> max_dist; // AUTO: 5% of source bounding-box diagonal
};

struct StageSeconds {
    double generate = 0.0;
    double densify = 0.0;
    double grid = 0.0;
    double raster = 0.0;
    double project = 0.0;
    double total = 0.0;
};

struct TransferResult {
    Texture baked;
    float coverage = 0.0f;
    StageSeconds seconds;
    size_t splat_count = 0;
    size_t triangle_count = 0; // target mesh
    float resolved_t_max = 0.0f;
    float resolved_spacing = 0.0f; // 0 when densification was skipped
    size_t densify_inserted = 0;
    ProjectionMap pmap; // kept for similarity masks
};

/// The full pipeline: source -> cloud (-> densify) -> grid; target ->
/// projection map; project with the chosen method. Generation and
/// densification run single-threaded; threads drive grid build,
/// rasterization and projection. AUTO values are resolved once here so
/// every method sees identical parameters.
TransferResult run_transfer(const SourceData& source, const Mesh& target,
                            const PipelineOptions& options);

struct BenchReport {
    int threads = 1;
    size_t splats = 0;
    size_t triangles = 0;
    int width = 0;
    int height = 0;
    double grid_seconds = 0.0;
    double raster_seconds = 0.0;
    double project_seconds = 0.0;
    Texture baked; // from the last repetition, for byte-identity checks
    float coverage = 0.0f;
};

/// Prepare the cloud once, then run the three measured stages (grid build,
/// rasterization, projection) `repetitions` times and report the minimum
/// wall time per stage.
BenchReport bench(const SourceData& source, const Mesh& target, const PipelineOptions& options,
                  int repetitions);

/// CSV rows "stage,threads,seconds,splats,triangles,width,height" with one
/// row per stage (grid, raster, project) per report.
void write_bench_csv(const std::vector<BenchReport>& reports, std::ostream& os);

} // namespace splatbake
