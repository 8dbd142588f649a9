#include "splatbake/geometry.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "splatbake/error.hpp"

namespace splatbake {

const char* to_string(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::MissingUV: return "MissingUV";
        case ErrorKind::MissingNormal: return "MissingNormal";
        case ErrorKind::MalformedRecord: return "MalformedRecord";
        case ErrorKind::EmptyMesh: return "EmptyMesh";
        case ErrorKind::DegenerateNormal: return "DegenerateNormal";
        case ErrorKind::EmptyCloud: return "EmptyCloud";
        case ErrorKind::BadHeader: return "BadHeader";
        case ErrorKind::MissingProperty: return "MissingProperty";
        case ErrorKind::TruncatedBody: return "TruncatedBody";
        case ErrorKind::InvalidValue: return "InvalidValue";
        case ErrorKind::NoCoverage: return "NoCoverage";
        case ErrorKind::GridCloudMismatch: return "GridCloudMismatch";
        case ErrorKind::DimensionMismatch: return "DimensionMismatch";
        case ErrorKind::IoError: return "IoError";
    }
    return "Error";
}

std::string Error::format(ErrorKind kind, const std::string& message, size_t line) {
    std::string s = to_string(kind);
    s += ": ";
    s += message;
    if (line != 0) {
        s += " (line ";
        s += std::to_string(line);
        s += ")";
    }
    return s;
}

Box3 Mesh::bounds() const {
    Box3 box;
    for (const Vec3& p : positions)
        box.expand(p);
    return box;
}

Barycentric barycentric_uv(Vec2 a, Vec2 b, Vec2 c, Vec2 p) {
    float denom = cross(b - a, c - a);
    if (denom == 0.f)
        return {-1.f, -1.f, -1.f};
    float b1 = cross(p - a, c - a) / denom;
    float b2 = cross(b - a, p - a) / denom;
    return {1.f - b1 - b2, b1, b2};
}

namespace {

struct Tokenizer {
    std::string_view text;
    size_t pos = 0;
    size_t line = 0;

    // Returns one logical line, stripped of comments, or false at EOF.
    bool next_line(std::string_view& out) {
        while (pos < text.size()) {
            size_t end = text.find('\n', pos);
            if (end == std::string_view::npos) end = text.size();
            std::string_view ln = text.substr(pos, end - pos);
            pos = end + 1;
            ++line;
            if (size_t hash = ln.find('#'); hash != std::string_view::npos)
                ln = ln.substr(0, hash);
            if (!ln.empty() && ln.back() == '\r')
                ln.remove_suffix(1);
            size_t b = ln.find_first_not_of(" \t");
            if (b == std::string_view::npos)
                continue;
            out = ln.substr(b);
            return true;
        }
        return false;
    }
};

std::vector<std::string_view> split_fields(std::string_view line) {
    std::vector<std::string_view> fields;
    size_t i = 0;
    while (i < line.size()) {
        while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
        size_t start = i;
        while (i < line.size() && line[i] != ' ' && line[i] != '\t') ++i;
        if (i > start) fields.push_back(line.substr(start, i - start));
    }
    return fields;
}

float parse_float(std::string_view s, size_t line) {
    float v = 0.f;
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || p != s.data() + s.size())
        throw Error(ErrorKind::MalformedRecord, "bad number '" + std::string(s) + "'", line);
    return v;
}

// OBJ index: 1-based, negative means relative to the current list size.
int resolve_index(std::string_view s, size_t list_size, size_t line) {
    int v = 0;
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || p != s.data() + s.size() || v == 0)
        throw Error(ErrorKind::MalformedRecord, "bad index '" + std::string(s) + "'", line);
    long resolved = v > 0 ? v - 1 : static_cast<long>(list_size) + v;
    if (resolved < 0 || resolved >= static_cast<long>(list_size))
        throw Error(ErrorKind::MalformedRecord, "index " + std::string(s) + " out of range", line);
    return static_cast<int>(resolved);
}

struct Corner {
    int pos = -1;
    int uv = -1;
    int nrm = -1; // -1 when the face carries no normal index
};

Corner parse_corner(std::string_view s, const Mesh& m, size_t line) {
    Corner c;
    size_t s1 = s.find('/');
    if (s1 == std::string_view::npos)
        throw Error(ErrorKind::MissingUV, "face corner '" + std::string(s) + "' has no UV index", line);
    size_t s2 = s.find('/', s1 + 1);

    c.pos = resolve_index(s.substr(0, s1), m.positions.size(), line);
    std::string_view uv_part =
        s2 == std::string_view::npos ? s.substr(s1 + 1) : s.substr(s1 + 1, s2 - s1 - 1);
    if (uv_part.empty())
        throw Error(ErrorKind::MissingUV, "face corner '" + std::string(s) + "' has no UV index", line);
    c.uv = resolve_index(uv_part, m.uvs.size(), line);
    if (s2 != std::string_view::npos) {
        std::string_view n_part = s.substr(s2 + 1);
        if (!n_part.empty())
            c.nrm = resolve_index(n_part, m.normals.size(), line);
    }
    return c;
}

std::vector<Vec3> area_weighted_normals(const std::vector<Vec3>& positions,
                                        const std::vector<TriangleRef>& triangles) {
    std::vector<Vec3> normals(positions.size(), Vec3{});
    for (const TriangleRef& t : triangles) {
        Vec3 a = positions[t.pos[0]];
        Vec3 e1 = positions[t.pos[1]] - a;
        Vec3 e2 = positions[t.pos[2]] - a;
        Vec3 n = cross(e1, e2); // length is twice the area, which gives the weighting
        for (int k = 0; k < 3; ++k)
            normals[t.pos[k]] += n;
    }
    for (Vec3& n : normals) {
        float len = length(n);
        n = len < 1e-12f ? Vec3{0.f, 0.f, 1.f} : n / len;
    }
    return normals;
}

} // namespace

Mesh parse_obj(std::string_view text) {
    Mesh mesh;
    Tokenizer tk{text};
    std::string_view line;
    bool any_face_normals = false;
    bool any_face_missing_normals = false;

    while (tk.next_line(line)) {
        auto fields = split_fields(line);
        if (fields.empty())
            continue;
        std::string_view rec = fields[0];

        if (rec == "v") {
            if (fields.size() < 4)
                throw Error(ErrorKind::MalformedRecord, "v record needs 3 coordinates", tk.line);
            mesh.positions.push_back({parse_float(fields[1], tk.line), parse_float(fields[2], tk.line),
                                      parse_float(fields[3], tk.line)});
        } else if (rec == "vt") {
            if (fields.size() < 3)
                throw Error(ErrorKind::MalformedRecord, "vt record needs 2 coordinates", tk.line);
            Vec2 uv{parse_float(fields[1], tk.line), parse_float(fields[2], tk.line)};
            if (uv.x < 0.f || uv.x > 1.f || uv.y < 0.f || uv.y > 1.f)
                throw Error(ErrorKind::MalformedRecord, "UV outside [0,1]; tiled/mirrored layouts are not supported",
                            tk.line);
            mesh.uvs.push_back(uv);
        } else if (rec == "vn") {
            if (fields.size() < 4)
                throw Error(ErrorKind::MalformedRecord, "vn record needs 3 coordinates", tk.line);
            Vec3 n{parse_float(fields[1], tk.line), parse_float(fields[2], tk.line),
                   parse_float(fields[3], tk.line)};
            float len = length(n);
            if (len < 1e-8f)
                throw Error(ErrorKind::MalformedRecord, "zero-length normal", tk.line);
            // Already-unit normals pass through untouched: float normalize
            // is not idempotent, and bit-stable normals make
            // parse -> serialize -> parse a fixpoint.
            mesh.normals.push_back(std::fabs(len - 1.0f) <= 1e-6f ? n : n / len);
        } else if (rec == "f") {
            if (fields.size() < 4)
                throw Error(ErrorKind::MalformedRecord, "face needs at least 3 corners", tk.line);
            std::vector<Corner> corners;
            corners.reserve(fields.size() - 1);
            for (size_t i = 1; i < fields.size(); ++i)
                corners.push_back(parse_corner(fields[i], mesh, tk.line));
            for (const Corner& c : corners)
                (c.nrm >= 0 ? any_face_normals : any_face_missing_normals) = true;
            // Fan triangulation from the first corner.
            for (size_t i = 2; i + 1 < fields.size(); ++i) {
                TriangleRef t;
                const Corner* tri[3] = {&corners[0], &corners[i - 1], &corners[i]};
                for (int k = 0; k < 3; ++k) {
                    t.pos[k] = tri[k]->pos;
                    t.uv[k] = tri[k]->uv;
                    t.nrm[k] = tri[k]->nrm;
                }
                mesh.triangles.push_back(t);
            }
        }
        // Other record types (g, o, s, usemtl, mtllib, ...) are ignored.
    }

    if (mesh.triangles.empty())
        throw Error(ErrorKind::EmptyMesh, "no faces");

    if (any_face_normals && any_face_missing_normals)
        throw Error(ErrorKind::MissingNormal, "some face corners lack a normal index while others have one");

    if (!any_face_normals) {
        // No face references normals: derive area-weighted vertex normals,
        // indexed in parallel with positions.
        mesh.normals = area_weighted_normals(mesh.positions, mesh.triangles);
        for (TriangleRef& t : mesh.triangles)
            t.nrm = t.pos;
    }

    return mesh;
}

Mesh load_obj(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw Error(ErrorKind::IoError, "cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_obj(ss.str());
}

std::string serialize_obj(const Mesh& mesh) {
    std::string out;
    out.reserve(mesh.positions.size() * 40 + mesh.triangles.size() * 30);
    char buf[128];
    for (const Vec3& p : mesh.positions) {
        std::snprintf(buf, sizeof(buf), "v %.9g %.9g %.9g\n", p.x, p.y, p.z);
        out += buf;
    }
    for (const Vec2& t : mesh.uvs) {
        std::snprintf(buf, sizeof(buf), "vt %.9g %.9g\n", t.x, t.y);
        out += buf;
    }
    for (const Vec3& n : mesh.normals) {
        std::snprintf(buf, sizeof(buf), "vn %.9g %.9g %.9g\n", n.x, n.y, n.z);
        out += buf;
    }
    for (const TriangleRef& t : mesh.triangles) {
        std::snprintf(buf, sizeof(buf), "f %d/%d/%d %d/%d/%d %d/%d/%d\n", t.pos[0] + 1, t.uv[0] + 1,
                      t.nrm[0] + 1, t.pos[1] + 1, t.uv[1] + 1, t.nrm[1] + 1, t.pos[2] + 1, t.uv[2] + 1,
                      t.nrm[2] + 1);
        out += buf;
    }
    return out;
}

SurfaceSample interpolate(const Mesh& mesh, int tri_index, const Barycentric& bary) {
    const TriangleRef& t = mesh.triangles[tri_index];
    Vec3 position = mesh.positions[t.pos[0]] * bary.b0 + mesh.positions[t.pos[1]] * bary.b1 +
                    mesh.positions[t.pos[2]] * bary.b2;
    Vec3 normal = mesh.normals[t.nrm[0]] * bary.b0 + mesh.normals[t.nrm[1]] * bary.b1 +
                  mesh.normals[t.nrm[2]] * bary.b2;
    float len = length(normal);
    if (len < 1e-8f)
        throw Error(ErrorKind::DegenerateNormal, "blended normal has near-zero length");
    return {position, normal / len};
}

} // namespace splatbake
