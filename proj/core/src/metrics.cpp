#include "splatbake/metrics.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>

#include "splatbake/error.hpp"
#include "splatbake/grid.hpp"

namespace splatbake {

SimilarityReport similarity(const Texture& a, const Texture& b, const ProjectionMap& mask) {
    if (!a.same_dims(b) || a.width != mask.width || a.height != mask.height)
        throw Error(ErrorKind::DimensionMismatch, "textures and mask must share dimensions");

    SimilarityReport rep;
    size_t matches = 0;
    double abs_sum = 0.0;
    for (int y = 0; y < a.height; ++y) {
        for (int x = 0; x < a.width; ++x) {
            if (!mask.at(x, y).valid)
                continue;
            const RGBA8 pa = a.get(x, y);
            const RGBA8 pb = b.get(x, y);
            const int dr = std::abs(int(pa.r) - int(pb.r));
            const int dg = std::abs(int(pa.g) - int(pb.g));
            const int db = std::abs(int(pa.b) - int(pb.b));
            ++rep.compared_texels;
            if (std::max({dr, dg, db}) <= 2)
                ++matches;
            abs_sum += dr + dg + db;
        }
    }
    if (rep.compared_texels > 0) {
        rep.similarity = static_cast<float>(matches) / static_cast<float>(rep.compared_texels);
        rep.mean_abs_error =
            static_cast<float>(abs_sum / (255.0 * 3.0 * static_cast<double>(rep.compared_texels)));
    }
    return rep;
}

namespace {

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// Source cloud plus the densification that applied to it.
struct PreparedCloud {
    SplatCloud cloud;
    double generate_seconds = 0.0;
    double densify_seconds = 0.0;
    float resolved_spacing = 0.0f;
    size_t inserted = 0;
};

PreparedCloud prepare_cloud(const SourceData& source, const PipelineOptions& opt) {
    const bool mesh_source = source.mesh != nullptr;
    if (mesh_source == (source.cloud != nullptr))
        throw Error(ErrorKind::InvalidValue, "provide exactly one source: mesh+texture or cloud");
    if (mesh_source && !source.texture)
        throw Error(ErrorKind::InvalidValue, "a mesh source needs a texture");

    PreparedCloud prep;
    auto t0 = std::chrono::steady_clock::now();
    if (mesh_source)
        prep.cloud = splats_from_mesh(*source.mesh, *source.texture, opt.supersample, 1);
    else
        prep.cloud = *source.cloud;
    prep.generate_seconds = seconds_since(t0);

    std::optional<float> spacing = opt.densify_spacing;
    if (!spacing && (opt.densify_auto || !mesh_source))
        spacing = 1.5f * median_nn_distance(prep.cloud);
    if (spacing && *spacing > 0.0f) {
        t0 = std::chrono::steady_clock::now();
        DensifyResult d = densify(prep.cloud, *spacing);
        prep.densify_seconds = seconds_since(t0);
        prep.cloud = std::move(d.cloud);
        prep.resolved_spacing = *spacing;
        prep.inserted = d.inserted;
    }
    return prep;
}

} // namespace

TransferResult run_transfer(const SourceData& source, const Mesh& target,
                            const PipelineOptions& opt) {
    if (opt.size <= 0)
        throw Error(ErrorKind::InvalidValue, "output size must be positive");
    if (opt.method == Method::PerFace && !source.mesh)
        throw Error(ErrorKind::InvalidValue, "the per-face method needs a mesh source");

    const auto total0 = std::chrono::steady_clock::now();
    TransferResult res;
    res.triangle_count = target.triangles.size();

    PreparedCloud prep = prepare_cloud(source, opt);
    res.seconds.generate = prep.generate_seconds;
    res.seconds.densify = prep.densify_seconds;
    res.resolved_spacing = prep.resolved_spacing;
    res.densify_inserted = prep.inserted;
    res.splat_count = prep.cloud.size();

    const size_t pixels = static_cast<size_t>(opt.size) * static_cast<size_t>(opt.size);
    auto t0 = std::chrono::steady_clock::now();
    const SpatialGrid grid = build_grid(prep.cloud, pixels, opt.threads);
    res.seconds.grid = seconds_since(t0);

    t0 = std::chrono::steady_clock::now();
    res.pmap = rasterize_projection_map(target, opt.size, opt.size, opt.threads);
    res.seconds.raster = seconds_since(t0);

    ProjectionParams params = opt.params;
    params.t_max = params.t_max.value_or(cell_diagonal(grid));
    res.resolved_t_max = *params.t_max;

    t0 = std::chrono::steady_clock::now();
    ProjectResult proj;
    switch (opt.method) {
    case Method::Grid:
        proj = project_texture(grid, prep.cloud, res.pmap, params, opt.threads);
        break;
    case Method::Global:
        proj = project_global(prep.cloud, res.pmap, params, opt.threads);
        break;
    case Method::PerFace:
        proj = project_per_face(*source.mesh, *source.texture, res.pmap, opt.max_angle_deg,
                                opt.max_dist, params.fallback, opt.threads);
        break;
    }
    res.seconds.project = seconds_since(t0);

    res.baked = std::move(proj.texture);
    res.coverage = proj.coverage;
    res.seconds.total = seconds_since(total0);
    return res;
}

BenchReport bench(const SourceData& source, const Mesh& target, const PipelineOptions& opt,
                  int repetitions) {
    if (repetitions < 1)
        throw Error(ErrorKind::InvalidValue, "repetitions must be >= 1");
    if (opt.method == Method::PerFace && !source.mesh)
        throw Error(ErrorKind::InvalidValue, "the per-face method needs a mesh source");

    PreparedCloud prep = prepare_cloud(source, opt);

    BenchReport rep;
    rep.threads = opt.threads;
    rep.splats = prep.cloud.size();
    rep.triangles = target.triangles.size();
    rep.width = rep.height = opt.size;
    rep.grid_seconds = rep.raster_seconds = rep.project_seconds =
        std::numeric_limits<double>::infinity();

    const size_t pixels = static_cast<size_t>(opt.size) * static_cast<size_t>(opt.size);
    for (int r = 0; r < repetitions; ++r) {
        auto t0 = std::chrono::steady_clock::now();
        const SpatialGrid grid = build_grid(prep.cloud, pixels, opt.threads);
        rep.grid_seconds = std::min(rep.grid_seconds, seconds_since(t0));

        t0 = std::chrono::steady_clock::now();
        const ProjectionMap pmap = rasterize_projection_map(target, opt.size, opt.size, opt.threads);
        rep.raster_seconds = std::min(rep.raster_seconds, seconds_since(t0));

        ProjectionParams params = opt.params;
        params.t_max = params.t_max.value_or(cell_diagonal(grid));

        t0 = std::chrono::steady_clock::now();
        ProjectResult proj;
        switch (opt.method) {
        case Method::Grid:
            proj = project_texture(grid, prep.cloud, pmap, params, opt.threads);
            break;
        case Method::Global:
            proj = project_global(prep.cloud, pmap, params, opt.threads);
            break;
        case Method::PerFace:
            proj = project_per_face(*source.mesh, *source.texture, pmap, opt.max_angle_deg,
                                    opt.max_dist, params.fallback, opt.threads);
            break;
        }
        rep.project_seconds = std::min(rep.project_seconds, seconds_since(t0));
        rep.baked = std::move(proj.texture);
        rep.coverage = proj.coverage;
    }
    return rep;
}

void write_bench_csv(const std::vector<BenchReport>& reports, std::ostream& os) {
    os << "stage,threads,seconds,splats,triangles,width,height\n";
    char line[256];
    for (const BenchReport& r : reports) {
        const struct {
            const char* name;
            double seconds;
        } rows[3] = {{"grid", r.grid_seconds}, {"raster", r.raster_seconds}, {"project", r.project_seconds}};
        for (const auto& row : rows) {
            std::snprintf(line, sizeof line, "%s,%d,%.6f,%zu,%zu,%d,%d\n", row.name, r.threads,
                          row.seconds, r.splats, r.triangles, r.width, r.height);
            os << line;
        }
    }
}

} // namespace splatbake
