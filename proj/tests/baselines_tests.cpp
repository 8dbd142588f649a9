#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "splatbake/baselines.hpp"
#include "splatbake/error.hpp"
#include "splatbake/grid.hpp"
#include "testutil.hpp"

using namespace splatbake;

namespace {

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

} // namespace

// ---------------------------------------------------------------------------
// global ray-cast baseline

TEST_CASE("global projection handles a mask with no valid texels") {
    Mesh quad = testutil::make_unit_quad();
    Texture tex = Texture::solid(4, 4, {255, 0, 0, 255});
    SplatCloud cloud = splats_from_mesh(quad, tex);

    ProjectionMap empty;
    empty.width = empty.height = 2;
    empty.texels.assign(4, ProjTexel{});
    empty.valid_count = 0;

    ProjectResult r = project_global(cloud, empty);
    CHECK(r.coverage == 0.0f);
    CHECK(r.texture.width == 2);
    // No texel was valid, so everything is the (default transparent) fallback.
    CHECK(r.texture.get(0, 0).a == 0);
}

TEST_CASE("global projection validates its inputs") {
    SplatCloud empty;
    ProjectionMap pmap = make_pmap({{{0, 0, 0}, {0, 0, 1}}});
    try {
        project_global(empty, pmap);
        FAIL("expected EmptyCloud");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::EmptyCloud);
    }

    SplatCloud unfinalized;
    GaussianSplat s;
    s.scale = {0.1f, 0.1f, 0.1f};
    s.normal = {0, 0, 1};
    unfinalized.splats.push_back(s);
    CHECK_THROWS_AS(project_global(unfinalized, pmap), Error);

    SplatCloud ok = unfinalized;
    ok.finalize();
    CHECK_THROWS_AS(project_global(ok, ProjectionMap{}), Error);
    ProjectionParams bad;
    bad.t_max = -0.5f;
    CHECK_THROWS_AS(project_global(ok, pmap, bad), Error);
}

TEST_CASE("gridded and gridless paths agree on the checkerboard quad") {
    Mesh quad = testutil::make_unit_quad();
    Texture tex = testutil::make_checker(32);
    SplatCloud cloud = splats_from_mesh(quad, tex);
    ProjectionMap pmap = rasterize_projection_map(quad, 32, 32);
    SpatialGrid grid = build_grid(cloud, 32 * 32);

    ProjectionParams params;
    params.t_max = grid.cell_size * 0.5f;
    ProjectResult g = project_texture(grid, cloud, pmap, params);
    ProjectResult o = project_global(cloud, pmap, params);
    CHECK(testutil::textures_equal(g.texture, o.texture));
    CHECK(g.coverage == o.coverage);
    CHECK(g.coverage == 1.0f);
}

// ---------------------------------------------------------------------------
// per-face baseline

TEST_CASE("per-face self-projection reproduces the source exactly on a quad") {
    Mesh quad = testutil::make_unit_quad();
    Texture tex = testutil::make_checker(16);
    ProjectionMap pmap = rasterize_projection_map(quad, 16, 16);
    ProjectResult r = project_per_face(quad, tex, pmap);
    CHECK(r.coverage == 1.0f);
    // Every foot point is the texel itself, so the bake equals the source.
    CHECK(testutil::textures_equal(r.texture, tex));
}

TEST_CASE("per-face normal cone is directional") {
    Mesh quad = testutil::make_unit_quad(); // face normal +z
    Texture tex = Texture::solid(4, 4, {200, 100, 50, 255});
    const Vec3 above{0.5f, 0.5f, 0.02f};

    const float c45 = std::sqrt(0.5f);
    ProjectionMap pmap = make_pmap({
        {above, {0, 0, 1}},        // aligned
        {above, {c45, 0, c45}},    // 45 degrees off: inside the 60-degree cone
        {above, {1, 0, 0}},        // 90 degrees off: outside
        {above, {0, 0, -1}},       // opposed: a winding flip must not match
    });
    ProjectResult r = project_per_face(quad, tex, pmap);
    CHECK(r.coverage == doctest::Approx(0.5f));
    CHECK(r.texture.get(0, 0).r == 200);
    CHECK(r.texture.get(1, 0).r == 200);
    CHECK(r.texture.get(2, 0).a == 0); // fallback
    CHECK(r.texture.get(3, 0).a == 0);

    // Widening the cone to just past 90 degrees admits the orthogonal texel.
    ProjectResult wide = project_per_face(quad, tex, pmap, 91.0f);
    CHECK(wide.coverage == doctest::Approx(0.75f));
}

TEST_CASE("per-face distance cap is inclusive and AUTO tracks the mesh size") {
    Mesh quad = testutil::make_unit_quad();
    Texture tex = Texture::solid(4, 4, {10, 220, 30, 255});
    ProjectionMap pmap = make_pmap({
        {{0.5f, 0.5f, 0.09f}, {0, 0, 1}},
        {{0.5f, 0.5f, 0.1f}, {0, 0, 1}},  // exactly at the cap
        {{0.5f, 0.5f, 0.11f}, {0, 0, 1}}, // just past it
    });
    ProjectResult r = project_per_face(quad, tex, pmap, 60.0f, 0.1f);
    CHECK(r.texture.get(0, 0).g == 220);
    CHECK(r.texture.get(1, 0).g == 220);
    CHECK(r.texture.get(2, 0).a == 0);
    CHECK(r.coverage == doctest::Approx(2.0f / 3.0f));

    // AUTO cap: 5% of the bounding-box diagonal (sqrt(2) here) ~ 0.0707.
    ProjectionMap probe = make_pmap({
        {{0.5f, 0.5f, 0.05f}, {0, 0, 1}},
        {{0.5f, 0.5f, 0.08f}, {0, 0, 1}},
    });
    ProjectResult auto_r = project_per_face(quad, tex, probe);
    CHECK(auto_r.coverage == doctest::Approx(0.5f));
}

TEST_CASE("per-face foot point must land inside the face") {
    Mesh quad = testutil::make_unit_quad();
    Texture tex = Texture::solid(4, 4, {255, 255, 255, 255});
    ProjectionMap pmap = make_pmap({
        {{1.5f, 0.5f, 0.01f}, {0, 0, 1}}, // foot lands outside the quad
        {{0.9f, 0.9f, 0.01f}, {0, 0, 1}}, // inside
    });
    ProjectResult r = project_per_face(quad, tex, pmap);
    CHECK(r.texture.get(0, 0).a == 0);
    CHECK(r.texture.get(1, 0).a == 255);
    CHECK(r.coverage == doctest::Approx(0.5f));
}

TEST_CASE("per-face distance ties go to the lowest face index") {
    // Two identical world triangles whose UVs point at opposite texture rows.
    Mesh m;
    m.positions = {{0, 0, 0}, {1, 0, 0}, {0, 1, 0}};
    m.normals = {{0, 0, 1}, {0, 0, 1}, {0, 0, 1}};
    m.uvs = {{0, 0}, {0.4f, 0}, {0, 0.4f},       // face 0: bottom-left region
             {0.6f, 0.6f}, {1, 0.6f}, {0.6f, 1}}; // face 1: top-right region
    m.triangles = {{{0, 1, 2}, {0, 1, 2}, {0, 1, 2}},
                   {{0, 1, 2}, {3, 4, 5}, {0, 1, 2}}};

    Texture tex = Texture::solid(8, 8, {0, 0, 0, 255});
    for (int y = 4; y < 8; ++y) // bottom-left UV region = bottom rows of image
        for (int x = 0; x < 4; ++x)
            tex.set(x, y, {255, 0, 0, 255});
    for (int y = 0; y < 4; ++y)
        for (int x = 4; x < 8; ++x)
            tex.set(x, y, {0, 0, 255, 255});

    ProjectionMap pmap = make_pmap({{{0.2f, 0.2f, 0.01f}, {0, 0, 1}}});
    ProjectResult r = project_per_face(m, tex, pmap);
    CHECK(r.texture.get(0, 0).r == 255); // face 0 won the tie
    CHECK(r.texture.get(0, 0).b == 0);

    // Swap the faces: the same geometry now resolves to the blue chart.
    std::swap(m.triangles[0], m.triangles[1]);
    ProjectResult swapped = project_per_face(m, tex, pmap);
    CHECK(swapped.texture.get(0, 0).b == 255);
    CHECK(swapped.texture.get(0, 0).r == 0);
}

TEST_CASE("per-face output is byte-identical across thread counts") {
    Mesh sphere = testutil::make_uv_sphere(9, 18, 1.0f);
    Texture tex = testutil::make_checker_gradient(32);
    ProjectionMap pmap = rasterize_projection_map(sphere, 32, 32);
    ProjectResult one = project_per_face(sphere, tex, pmap, 60.0f, std::nullopt, {0, 0, 0, 0}, 1);
    ProjectResult four = project_per_face(sphere, tex, pmap, 60.0f, std::nullopt, {0, 0, 0, 0}, 4);
    CHECK(testutil::textures_equal(one.texture, four.texture));
    CHECK(one.coverage == four.coverage);
    CHECK(one.coverage == 1.0f); // self-projection: every texel finds its own face
}

TEST_CASE("per-face validates its inputs") {
    Mesh quad = testutil::make_unit_quad();
    Texture tex = Texture::solid(2, 2, {1, 2, 3, 255});
    ProjectionMap pmap = make_pmap({{{0.5f, 0.5f, 0}, {0, 0, 1}}});

    Mesh empty;
    try {
        project_per_face(empty, tex, pmap);
        FAIL("expected EmptyMesh");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::EmptyMesh);
    }

    CHECK_THROWS_AS(project_per_face(quad, Texture{}, pmap), Error);
    CHECK_THROWS_AS(project_per_face(quad, tex, ProjectionMap{}), Error);
    CHECK_THROWS_AS(project_per_face(quad, tex, pmap, 60.0f, -1.0f), Error);
}
