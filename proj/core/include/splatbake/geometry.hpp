#pragma once

#include <array>
#include <string>
#include <string_view>
#include <vector>

#include "splatbake/vec.hpp"

namespace splatbake {

/// Per-corner attribute indices of one triangle. Each corner references a
/// position, a UV, and a normal by independent 0-based indices.
struct TriangleRef {
    std::array<int, 3> pos{};
    std::array<int, 3> uv{};
    std::array<int, 3> nrm{};
};

/// Indexed triangle mesh with per-vertex position, normal and UV.
/// Immutable after construction; safe for concurrent reads.
struct Mesh {
    std::vector<Vec3> positions;
    std::vector<Vec3> normals; // unit length after load
    std::vector<Vec2> uvs;     // inside [0,1]^2
    std::vector<TriangleRef> triangles;

    Box3 bounds() const;
};

struct Barycentric {
    float b0 = 0.f, b1 = 0.f, b2 = 0.f;

    bool inside() const { return b0 >= 0.f && b1 >= 0.f && b2 >= 0.f; }
};

/// Signed barycentric weights of p in triangle (a,b,c) in UV space.
/// Weights are normalized by the signed area, so they work for either
/// winding; all three >= 0 iff p is inside the closed triangle.
Barycentric barycentric_uv(Vec2 a, Vec2 b, Vec2 c, Vec2 p);

/// Parse the OBJ subset: v, vt, vn, f records, '#' comments. Faces must
/// reference UVs (v/vt/vn or v/vt); n-gons are fan-triangulated from the
/// first corner; negative indices resolve relative to the current list.
/// Files whose faces carry no normal indices get area-weighted vertex
/// normals computed from the geometry.
Mesh parse_obj(std::string_view text);

Mesh load_obj(const std::string& path);

/// Serialize to the same OBJ subset. parse_obj(serialize_obj(m)) returns
/// identical attribute lists (floats are printed with round-trip precision).
std::string serialize_obj(const Mesh& mesh);

struct SurfaceSample {
    Vec3 position;
    Vec3 normal; // unit
};

/// Barycentric interpolation of position and normal on one triangle.
/// Throws DegenerateNormal when the blended normal has near-zero length.
SurfaceSample interpolate(const Mesh& mesh, int tri_index, const Barycentric& bary);

} // namespace splatbake
