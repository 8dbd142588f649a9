// Microbenchmarks for the hot paths: grid construction, projection map
// rasterization, and the three texel-projection methods at a desk scale.
// For end-to-end numbers with thread sweeps use `splatbake bench` instead.
#include <benchmark/benchmark.h>

#include <cmath>
#include <cstdint>

#include "splatbake/baselines.hpp"
#include "splatbake/geometry.hpp"
#include "splatbake/grid.hpp"
#include "splatbake/image.hpp"
#include "splatbake/project.hpp"
#include "splatbake/raster.hpp"
#include "splatbake/splat.hpp"

namespace {

constexpr float kPi = 3.14159265358979f;

// UV sphere with a simple equirectangular unwrap. Plenty of valid texels,
// no degenerate UV triangles away from the poles.
splatbake::Mesh make_sphere(int rings, int segments, float radius) {
    splatbake::Mesh m;
    for (int r = 0; r <= rings; ++r) {
        float v = float(r) / float(rings);
        float phi = v * kPi;
        for (int s = 0; s <= segments; ++s) {
            float u = float(s) / float(segments);
            float theta = u * 2.0f * kPi;
            splatbake::Vec3 n{std::sin(phi) * std::cos(theta), std::cos(phi),
                              std::sin(phi) * std::sin(theta)};
            m.positions.push_back(n * radius);
            m.normals.push_back(n);
            m.uvs.push_back({u, 1.0f - v});
        }
    }
    int stride = segments + 1;
    for (int r = 0; r < rings; ++r) {
        for (int s = 0; s < segments; ++s) {
            int i0 = r * stride + s;
            int i1 = i0 + 1;
            int i2 = i0 + stride;
            int i3 = i2 + 1;
            if (r > 0)
                m.triangles.push_back({{i0, i1, i2}, {i0, i1, i2}, {i0, i1, i2}});
            if (r + 1 < rings)
                m.triangles.push_back({{i1, i3, i2}, {i1, i3, i2}, {i1, i3, i2}});
        }
    }
    return m;
}

splatbake::Texture make_checker(int size) {
    splatbake::Texture t = splatbake::Texture::solid(size, size, {0, 0, 0, 255});
    for (int y = 0; y < size; ++y)
        for (int x = 0; x < size; ++x) {
            bool on = ((x / 8) + (y / 8)) & 1;
            uint8_t v = on ? 230 : 25;
            t.set(x, y, {v, uint8_t(255 - v), v, 255});
        }
    return t;
}

struct Scene {
    splatbake::Mesh source;
    splatbake::Mesh target;
    splatbake::Texture texture;
    splatbake::SplatCloud cloud;
    splatbake::ProjectionMap pmap;
    splatbake::SpatialGrid grid;
};

const Scene& scene() {
    static Scene s = [] {
        Scene sc;
        sc.source = make_sphere(48, 96, 1.0f);
        sc.target = make_sphere(37, 73, 1.02f);  // different tessellation
        sc.texture = make_checker(256);
        sc.cloud = splatbake::splats_from_mesh(sc.source, sc.texture);
        sc.pmap = splatbake::rasterize_projection_map(sc.target, 256, 256);
        sc.grid = splatbake::build_grid(sc.cloud, 256 * 256);
        return sc;
    }();
    return s;
}

void BM_GridBuild(benchmark::State& state) {
    const Scene& sc = scene();
    for (auto _ : state) {
        auto g = splatbake::build_grid(sc.cloud, 256 * 256);
        benchmark::DoNotOptimize(g.ids.data());
    }
    state.SetItemsProcessed(int64_t(state.iterations()) * int64_t(sc.cloud.splats.size()));
}
BENCHMARK(BM_GridBuild)->Unit(benchmark::kMillisecond);

void BM_Rasterize(benchmark::State& state) {
    const Scene& sc = scene();
    for (auto _ : state) {
        auto pm = splatbake::rasterize_projection_map(sc.target, 256, 256);
        benchmark::DoNotOptimize(pm.texels.data());
    }
}
BENCHMARK(BM_Rasterize)->Unit(benchmark::kMillisecond);

void BM_ProjectGrid(benchmark::State& state) {
    const Scene& sc = scene();
    for (auto _ : state) {
        auto r = splatbake::project_texture(sc.grid, sc.cloud, sc.pmap);
        benchmark::DoNotOptimize(r.texture.data.data());
    }
}
BENCHMARK(BM_ProjectGrid)->Unit(benchmark::kMillisecond);

void BM_ProjectGlobal(benchmark::State& state) {
    const Scene& sc = scene();
    for (auto _ : state) {
        auto r = splatbake::project_global(sc.cloud, sc.pmap);
        benchmark::DoNotOptimize(r.texture.data.data());
    }
}
BENCHMARK(BM_ProjectGlobal)->Unit(benchmark::kMillisecond);

void BM_ProjectPerFace(benchmark::State& state) {
    const Scene& sc = scene();
    for (auto _ : state) {
        auto r = splatbake::project_per_face(sc.source, sc.texture, sc.pmap);
        benchmark::DoNotOptimize(r.texture.data.data());
    }
}
BENCHMARK(BM_ProjectPerFace)->Unit(benchmark::kMillisecond);

void BM_RayGaussianWeight(benchmark::State& state) {
    const Scene& sc = scene();
    const auto& sp = sc.cloud.splats[sc.cloud.splats.size() / 2];
    splatbake::ProjectionParams params;
    params.t_max = 0.25f;
    splatbake::Vec3 origin = sp.position + sp.normal * 0.01f;
    splatbake::Vec3 dir = sp.normal * -1.0f;
    for (auto _ : state) {
        auto c = splatbake::ray_gaussian_weight(origin, dir, sp, params);
        benchmark::DoNotOptimize(c);
    }
}
BENCHMARK(BM_RayGaussianWeight);

}  // namespace

BENCHMARK_MAIN();
