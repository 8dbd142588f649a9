#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <limits>
#include <random>

#include "splatbake/baselines.hpp"
#include "splatbake/error.hpp"
#include "splatbake/grid.hpp"
#include "splatbake/project.hpp"
#include "testutil.hpp"

using namespace splatbake;

namespace {

GaussianSplat make_splat(Vec3 pos, Vec3 scale, Vec3 color, float opacity, uint32_t id,
                         Vec3 normal = {0, 0, 1}) {
    GaussianSplat s;
    s.position = pos;
    s.normal = normal;
    s.scale = scale;
    s.color = color;
    s.opacity = opacity;
    s.id = id;
    return s;
}

ProjectionMap make_pmap(const std::vector<std::pair<Vec3, Vec3>>& texels) {
    ProjectionMap map;
    map.width = static_cast<int>(texels.size());
    map.height = 1;
    for (const auto& [pos, normal] : texels) {
        map.texels.push_back({pos, normal, 1});
        ++map.valid_count;
    }
    return map;
}

ProjectionParams with_t_max(float t) {
    ProjectionParams p;
    p.t_max = t;
    return p;
}

uint8_t byte_of(float v) {
    v = std::clamp(v, 0.0f, 1.0f);
    return static_cast<uint8_t>(v * 255.0f + 0.5f);
}

} // namespace

// ---------------------------------------------------------------------------
// ray_gaussian_weight

TEST_CASE("centered aligned splat contributes its full opacity") {
    GaussianSplat s = make_splat({1, 2, 3}, {0.1f, 0.1f, 0.01f}, {0.3f, 0.6f, 0.9f}, 0.8f, 42);
    auto c = ray_gaussian_weight({1, 2, 3}, {0, 0, 1}, s, with_t_max(0.5f));
    REQUIRE(c.has_value());
    CHECK(c->splat_id == 42);
    CHECK(c->t == doctest::Approx(0.0f));
    CHECK(c->alpha_eff == doctest::Approx(0.8f)); // exp(0) * cos(0) * opacity
    CHECK(c->color.x == 0.3f);
    CHECK(c->color.z == 0.9f);
}

TEST_CASE("alignment filter rejects grazing and back-facing splats") {
    GaussianSplat s = make_splat({0, 0, 0}, {0.1f, 0.1f, 0.1f}, {1, 1, 1}, 1.0f, 0);
    // Back-facing: splat normal +z, ray along -z.
    CHECK_FALSE(ray_gaussian_weight({0, 0, 0}, {0, 0, -1}, s, with_t_max(0.5f)).has_value());
    // Orthogonal: cosine == 0 == tau is rejected (strict inequality).
    CHECK_FALSE(ray_gaussian_weight({0, 0, 0}, {1, 0, 0}, s, with_t_max(0.5f)).has_value());

    // Tilted 60 degrees: cosine 0.5 scales alpha and clears tau = 0.
    const Vec3 dir = normalized(Vec3{std::sqrt(3.0f) * 0.5f, 0.0f, 0.5f});
    auto c = ray_gaussian_weight({0, 0, 0}, dir, s, with_t_max(0.5f));
    REQUIRE(c.has_value());
    CHECK(c->alpha_eff == doctest::Approx(0.5f).epsilon(1e-5));

    // Same ray against tau = 0.6 fails the threshold.
    ProjectionParams strict = with_t_max(0.5f);
    strict.tau = 0.6f;
    CHECK_FALSE(ray_gaussian_weight({0, 0, 0}, dir, s, strict).has_value());
}

TEST_CASE("Mahalanobis cut accepts the boundary and rejects beyond") {
    GaussianSplat s = make_splat({0, 0, 0}, {0.1f, 0.4f, 0.01f}, {1, 1, 1}, 1.0f, 0);
    // Offset 2 sigma along x: alpha = exp(-2).
    auto two = ray_gaussian_weight({0.2f, 0, -1}, {0, 0, 1}, s, with_t_max(2.0f));
    REQUIRE(two.has_value());
    CHECK(two->alpha_eff == doctest::Approx(std::exp(-2.0f)).epsilon(1e-5));
    CHECK(two->t == doctest::Approx(1.0f).epsilon(1e-5));

    // Exactly 3 sigma is inside the cut (d^2 > cut^2 rejects, equality stays).
    auto three = ray_gaussian_weight({0.3f, 0, -1}, {0, 0, 1}, s, with_t_max(2.0f));
    REQUIRE(three.has_value());
    CHECK(three->alpha_eff == doctest::Approx(std::exp(-4.5f)).epsilon(1e-4));

    // 3.1 sigma along x is out; the same offset along y is only 0.775 sigma.
    CHECK_FALSE(ray_gaussian_weight({0.31f, 0, -1}, {0, 0, 1}, s, with_t_max(2.0f)).has_value());
    CHECK(ray_gaussian_weight({0, 0.31f, -1}, {0, 0, 1}, s, with_t_max(2.0f)).has_value());

    // A tighter sigma_cut turns the 2-sigma hit away.
    ProjectionParams tight = with_t_max(2.0f);
    tight.sigma_cut = 1.9f;
    CHECK_FALSE(ray_gaussian_weight({0.2f, 0, -1}, {0, 0, 1}, s, tight).has_value());
}

TEST_CASE("closest approach must land inside the t window") {
    // Isotropic splat so the ray parameter equals geometric distance.
    GaussianSplat s = make_splat({0, 0, 0.4f}, {0.05f, 0.05f, 0.05f}, {1, 1, 1}, 1.0f, 0);
    CHECK(ray_gaussian_weight({0, 0, 0}, {0, 0, 1}, s, with_t_max(0.5f)).has_value());
    CHECK_FALSE(ray_gaussian_weight({0, 0, 0}, {0, 0, 1}, s, with_t_max(0.39f)).has_value());

    // Behind the origin: reachable within the 3*max(scale) backward pad only.
    GaussianSplat behind = make_splat({0, 0, -0.1f}, {0.05f, 0.05f, 0.05f}, {1, 1, 1}, 1.0f, 0);
    auto c = ray_gaussian_weight({0, 0, 0}, {0, 0, 1}, behind, with_t_max(0.5f));
    REQUIRE(c.has_value());
    CHECK(c->t == doctest::Approx(-0.1f));
    GaussianSplat far_behind = make_splat({0, 0, -0.2f}, {0.05f, 0.05f, 0.05f}, {1, 1, 1}, 1.0f, 0);
    CHECK_FALSE(ray_gaussian_weight({0, 0, 0}, {0, 0, 1}, far_behind, with_t_max(0.5f)).has_value());
}

TEST_CASE("ray weight needs a resolved t_max") {
    GaussianSplat s = make_splat({0, 0, 0}, {0.1f, 0.1f, 0.1f}, {1, 1, 1}, 1.0f, 0);
    try {
        ray_gaussian_weight({0, 0, 0}, {0, 0, 1}, s, ProjectionParams{});
        FAIL("expected InvalidValue");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::InvalidValue);
    }
}

// ---------------------------------------------------------------------------
// project_texture compositing

TEST_CASE("a lone contributor bakes its exact color at any opacity") {
    SplatCloud cloud;
    cloud.splats.push_back(make_splat({0.5f, 0.5f, 0}, {0.1f, 0.1f, 0.01f},
                                      {0.1f, 0.7f, 0.2f}, 0.3f, 0));
    cloud.finalize();
    SpatialGrid grid = build_grid(cloud, 1);
    ProjectionMap pmap = make_pmap({{{0.5f, 0.5f, 0}, {0, 0, 1}}});

    ProjectResult r = project_texture(grid, cloud, pmap, with_t_max(0.5f));
    CHECK(r.coverage == 1.0f);
    const RGBA8 px = r.texture.get(0, 0);
    // C/A collapses to the splat color no matter the alpha.
    CHECK(px.r == byte_of(0.1f));
    CHECK(px.g == byte_of(0.7f));
    CHECK(px.b == byte_of(0.2f));
    CHECK(px.a == 255);
}

TEST_CASE("texels with an empty cell fall back and lower coverage") {
    SplatCloud cloud;
    cloud.splats.push_back(make_splat({0, 0, 0}, {0.01f, 0.01f, 0.01f}, {1, 0, 0}, 1.0f, 0));
    cloud.splats.push_back(make_splat({1, 1, 1}, {0.01f, 0.01f, 0.01f}, {0, 1, 0}, 1.0f, 1));
    cloud.finalize();
    SpatialGrid grid = build_grid(cloud, 64); // 4 cells per axis

    ProjectionMap pmap = make_pmap({
        {{0, 0, 0}, {0, 0, 1}},          // right on splat 0
        {{0.5f, 0.5f, 0.5f}, {0, 0, 1}}, // the empty middle of the box
    });
    ProjectionParams params = with_t_max(0.05f);
    params.fallback = {7, 8, 9, 10};
    ProjectResult r = project_texture(grid, cloud, pmap, params);
    CHECK(r.coverage == doctest::Approx(0.5f));
    CHECK(r.texture.get(0, 0).r == 255);
    CHECK(r.texture.get(0, 0).a == 255);
    const RGBA8 fb = r.texture.get(1, 0);
    CHECK(fb.r == 7);
    CHECK(fb.g == 8);
    CHECK(fb.b == 9);
    CHECK(fb.a == 10);
}

TEST_CASE("contributors at equal depth composite in id order") {
    const Vec3 pos{0.5f, 0.5f, 0};
    const Vec3 sc{0.1f, 0.1f, 0.01f};
    SplatCloud cloud;
    cloud.splats.push_back(make_splat(pos, sc, {1, 0, 0}, 0.5f, 0));
    cloud.splats.push_back(make_splat(pos, sc, {0, 1, 0}, 0.5f, 1));
    cloud.finalize();
    SpatialGrid grid = build_grid(cloud, 1);
    ProjectionMap pmap = make_pmap({{pos, {0, 0, 1}}});

    ProjectResult r = project_texture(grid, cloud, pmap, with_t_max(0.5f));
    // Red (id 0) first: C = (0.5, 0.25, 0), A = 0.75.
    RGBA8 px = r.texture.get(0, 0);
    CHECK(px.r == byte_of(0.5f / 0.75f));
    CHECK(px.g == byte_of(0.25f / 0.75f));
    CHECK(px.b == 0);

    // Swapping the colors swaps the blend weights with them.
    std::swap(cloud.splats[0].color, cloud.splats[1].color);
    cloud.finalize();
    r = project_texture(grid, cloud, pmap, with_t_max(0.5f));
    px = r.texture.get(0, 0);
    CHECK(px.g == byte_of(0.5f / 0.75f));
    CHECK(px.r == byte_of(0.25f / 0.75f));
}

TEST_CASE("depth order beats id order when t differs") {
    SplatCloud cloud;
    // The nearer splat gets the higher id on purpose.
    cloud.splats.push_back(make_splat({0.5f, 0.5f, 0.2f}, {0.05f, 0.05f, 0.05f}, {0, 0, 0}, 0.8f, 0));
    cloud.splats.push_back(make_splat({0.5f, 0.5f, 0.1f}, {0.05f, 0.05f, 0.05f}, {1, 1, 1}, 0.6f, 1));
    cloud.finalize();
    SpatialGrid grid = build_grid(cloud, 1);
    ProjectionMap pmap = make_pmap({{{0.5f, 0.5f, 0}, {0, 0, 1}}});

    ProjectResult r = project_texture(grid, cloud, pmap, with_t_max(0.5f));
    // White at t=0.1 composites first: C = 0.6, A = 0.6 + 0.4*0.8 = 0.92.
    const float want = 0.6f / 0.92f;
    const RGBA8 px = r.texture.get(0, 0);
    CHECK(px.r == byte_of(want));
    CHECK(px.g == byte_of(want));
    CHECK(px.b == byte_of(want));
}

TEST_CASE("transmittance early-out hides fully occluded splats") {
    SplatCloud cloud;
    cloud.splats.push_back(make_splat({0.5f, 0.5f, 0.1f}, {0.05f, 0.05f, 0.05f}, {1, 0, 0}, 1.0f, 0));
    cloud.splats.push_back(make_splat({0.5f, 0.5f, 0.2f}, {0.05f, 0.05f, 0.05f}, {0, 0, 1}, 1.0f, 1));
    cloud.finalize();
    SpatialGrid grid = build_grid(cloud, 1);
    ProjectionMap pmap = make_pmap({{{0.5f, 0.5f, 0}, {0, 0, 1}}});

    // Front alpha 1.0 kills the transmittance; the blue splat never shows.
    ProjectResult r = project_texture(grid, cloud, pmap, with_t_max(0.5f));
    CHECK(r.texture.get(0, 0).r == 255);
    CHECK(r.texture.get(0, 0).b == 0);

    // Dropping the front opacity lets the back splat bleed through.
    cloud.splats[0].opacity = 0.5f;
    cloud.finalize();
    r = project_texture(grid, cloud, pmap, with_t_max(0.5f));
    CHECK(r.texture.get(0, 0).b > 0);
}

TEST_CASE("AUTO t_max spans the cell diagonal") {
    SplatCloud cloud;
    cloud.splats.push_back(make_splat({0, 0, 0}, {1e-6f, 1e-6f, 1e-6f}, {1, 1, 1}, 1.0f, 0));
    cloud.splats.push_back(make_splat({1, 1, 1}, {1e-6f, 1e-6f, 1e-6f}, {1, 1, 1}, 1.0f, 1));
    cloud.splats.push_back(make_splat({0.5f, 0.5f, 0.9f}, {0.05f, 0.05f, 0.05f}, {0, 1, 0}, 1.0f, 2));
    cloud.finalize();
    SpatialGrid grid = build_grid(cloud, 1); // one cell: diagonal ~ sqrt(3)
    ProjectionMap pmap = make_pmap({{{0.5f, 0.5f, 0.1f}, {0, 0, 1}}});

    ProjectionParams auto_t; // t_max unset
    ProjectResult hit = project_texture(grid, cloud, pmap, auto_t);
    CHECK(hit.coverage == 1.0f);
    CHECK(hit.texture.get(0, 0).g == 255);

    ProjectResult miss = project_texture(grid, cloud, pmap, with_t_max(0.5f));
    CHECK(miss.coverage == 0.0f);
}

TEST_CASE("projection validates its inputs") {
    SplatCloud cloud;
    cloud.splats.push_back(make_splat({0, 0, 0}, {0.1f, 0.1f, 0.1f}, {1, 1, 1}, 1.0f, 0));
    cloud.finalize();
    SpatialGrid grid = build_grid(cloud, 1);
    ProjectionMap pmap = make_pmap({{{0, 0, 0}, {0, 0, 1}}});

    SplatCloud other = cloud;
    other.splats.push_back(make_splat({1, 0, 0}, {0.1f, 0.1f, 0.1f}, {1, 1, 1}, 1.0f, 1));
    other.finalize();
    try {
        project_texture(grid, other, pmap, with_t_max(0.5f));
        FAIL("expected GridCloudMismatch");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::GridCloudMismatch);
    }

    CHECK_THROWS_AS(project_texture(grid, cloud, ProjectionMap{}, with_t_max(0.5f)), Error);
    CHECK_THROWS_AS(project_texture(grid, cloud, pmap, with_t_max(0.0f)), Error);
    CHECK_THROWS_AS(project_texture(grid, cloud, pmap, with_t_max(-1.0f)), Error);
    CHECK_THROWS_AS(
        project_texture(grid, cloud, pmap,
                        with_t_max(std::numeric_limits<float>::quiet_NaN())),
        Error);
}

// ---------------------------------------------------------------------------
// equivalence with the gridless oracle

// Single-cell lookups see exactly the texel's own cell, so equivalence with
// the full scan is guaranteed where every contributor touches the texel at
// its own position: planar charts, where splat frames and texel normals
// coincide and t* is exactly zero. Curved surfaces admit contributors at
// t* > 0 from neighboring cells and need the DDA traversal below.
TEST_CASE("single-cell traversal matches the oracle on planar instances") {
    std::mt19937 rng(9001);
    std::uniform_real_distribution<float> u01(0.0f, 1.0f);

    for (int i = 0; i < 12; ++i) {
        // A randomly oriented rectangle with a random UV window.
        Vec3 eu = normalized(Vec3{u01(rng) - 0.5f, u01(rng) - 0.5f, u01(rng) - 0.5f});
        Vec3 helper{u01(rng) - 0.5f, u01(rng) - 0.5f, u01(rng) + 0.6f};
        Vec3 ev = normalized(cross(eu, helper));
        eu = eu * (0.5f + 1.5f * u01(rng));
        ev = ev * (0.5f + 1.5f * u01(rng));
        const Vec3 origin{2.0f * u01(rng) - 1.0f, 2.0f * u01(rng) - 1.0f, 2.0f * u01(rng) - 1.0f};
        const Vec2 uv_lo{0.4f * u01(rng), 0.4f * u01(rng)};
        const Vec2 uv_hi{uv_lo.x + 0.4f + 0.2f * u01(rng), uv_lo.y + 0.4f + 0.2f * u01(rng)};
        Mesh mesh = testutil::make_quad(origin, eu, ev, uv_lo, uv_hi);

        const int src = 16 + 8 * (i % 3);
        Texture tex = testutil::make_random_texture(rng, src, src);
        SplatCloud cloud = splats_from_mesh(mesh, tex, i % 4 == 1 ? 2 : 1);

        const int out = 16 + (i * 7) % 49;
        ProjectionMap pmap = rasterize_projection_map(mesh, out, out);
        SpatialGrid grid = build_grid(cloud, static_cast<size_t>(out) * out);

        ProjectionParams params;
        params.sigma_cut = 1.0f + 2.0f * u01(rng);
        params.t_max = grid.cell_size * (0.2f + 0.8f * u01(rng));

        ProjectResult a = project_texture(grid, cloud, pmap, params, 2);
        ProjectResult b = project_global(cloud, pmap, params, 2);
        CHECK(testutil::textures_equal(a.texture, b.texture));
        CHECK(a.coverage == b.coverage);
    }
}

TEST_CASE("DDA traversal matches the oracle on curved and cross-shape instances") {
    std::mt19937 rng(424242);
    std::uniform_real_distribution<float> u01(0.0f, 1.0f);

    // Coarse spheres projected onto themselves: facet normals disagree with
    // interpolated normals, which is exactly the regime single-cell lookups
    // cannot serve.
    for (int i = 0; i < 6; ++i) {
        Mesh mesh = testutil::make_uv_sphere(3 + i % 5, 4 + i % 7, 0.4f + 0.8f * u01(rng));
        Texture tex = testutil::make_random_texture(rng, 24, 24);
        SplatCloud cloud = splats_from_mesh(mesh, tex);

        const int out = 16 + (i * 11) % 43;
        ProjectionMap pmap = rasterize_projection_map(mesh, out, out);
        SpatialGrid grid = build_grid(cloud, static_cast<size_t>(out) * out);

        ProjectionParams params;
        params.traversal = Traversal::Dda;
        params.sigma_cut = 1.0f + 2.0f * u01(rng);
        params.t_max = grid.cell_size * (0.5f + 2.0f * u01(rng)); // may exceed a cell

        ProjectResult a = project_texture(grid, cloud, pmap, params, 2);
        ProjectResult b = project_global(cloud, pmap, params, 2);
        CHECK(testutil::textures_equal(a.texture, b.texture));
        CHECK(a.coverage == b.coverage);
    }

    Mesh source = testutil::make_uv_sphere(9, 18, 1.0f);
    Mesh target = testutil::make_uv_sphere(8, 15, 1.06f);
    Texture tex = testutil::make_checker(24);
    SplatCloud cloud = splats_from_mesh(source, tex);
    ProjectionMap pmap = rasterize_projection_map(target, 32, 32);
    SpatialGrid grid = build_grid(cloud, 32 * 32);

    ProjectionParams params; // AUTO t_max resolves to the cell diagonal
    params.traversal = Traversal::Dda;
    ProjectResult a = project_texture(grid, cloud, pmap, params, 2);
    ProjectResult b = project_global(cloud, pmap, params, 2);
    CHECK(testutil::textures_equal(a.texture, b.texture));
    CHECK(a.coverage == b.coverage);
    CHECK(a.coverage > 0.9f); // the transfer actually reached the target
}

TEST_CASE("projection output is byte-identical across thread counts") {
    Mesh mesh = testutil::make_uv_sphere(9, 18, 1.0f);
    Texture tex = testutil::make_checker(32);
    SplatCloud cloud = splats_from_mesh(mesh, tex);
    ProjectionMap pmap = rasterize_projection_map(mesh, 48, 48);
    SpatialGrid grid = build_grid(cloud, 48 * 48);

    ProjectionParams params;
    ProjectResult base = project_texture(grid, cloud, pmap, params, 1);
    for (int threads : {2, 4, 8}) {
        ProjectResult r = project_texture(grid, cloud, pmap, params, threads);
        CHECK(testutil::textures_equal(base.texture, r.texture));
        CHECK(r.coverage == base.coverage);
    }

    params.traversal = Traversal::Dda;
    ProjectResult d1 = project_texture(grid, cloud, pmap, params, 1);
    ProjectResult d4 = project_texture(grid, cloud, pmap, params, 4);
    CHECK(testutil::textures_equal(d1.texture, d4.texture));

    ProjectResult g1 = project_global(cloud, pmap, params, 1);
    ProjectResult g3 = project_global(cloud, pmap, params, 3);
    CHECK(testutil::textures_equal(g1.texture, g3.texture));
}

TEST_CASE("coverage never drops when splats are added") {
    Mesh mesh = testutil::make_uv_sphere(7, 14, 1.0f);
    Texture tex = testutil::make_checker(24);
    SplatCloud full = splats_from_mesh(mesh, tex);
    ProjectionMap pmap = rasterize_projection_map(mesh, 32, 32);

    SplatCloud half;
    half.splats.assign(full.splats.begin(), full.splats.begin() + full.size() / 2);
    half.finalize();

    // The gridless path sees every splat, so the candidate sets of the two
    // runs nest and per-texel accumulated alpha can only grow.
    ProjectionParams params = with_t_max(0.2f);
    ProjectResult a = project_global(half, pmap, params);
    ProjectResult b = project_global(full, pmap, params);
    CHECK(b.coverage >= a.coverage);
}
