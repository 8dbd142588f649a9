#include "splatbake/splat.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>
#include <string_view>

#include "splatbake/error.hpp"
#include "splatbake/threading.hpp"
#include "uv_coverage.hpp"

namespace splatbake {

namespace {

constexpr float kShC0 = 0.2820947918f; // SH degree-0 basis
constexpr float kMinSigma = 1e-12f;

float clamp01(float v) { return std::clamp(v, 0.0f, 1.0f); }

Vec3 any_perpendicular(Vec3 n) {
    // Axis least aligned with n, projected into its plane.
    Vec3 e = std::abs(n.x) <= std::abs(n.y) && std::abs(n.x) <= std::abs(n.z) ? Vec3{1, 0, 0}
             : std::abs(n.y) <= std::abs(n.z)                                 ? Vec3{0, 1, 0}
                                                                              : Vec3{0, 0, 1};
    return normalized(e - n * dot(n, e));
}

} // namespace

Box3 splat_aabb(const GaussianSplat& s) {
    const Mat3 r = s.orientation.to_mat3();
    Box3 box;
    Vec3 radius;
    for (int i = 0; i < 3; ++i) {
        const float a = r.c0[i] * s.scale.x;
        const float b = r.c1[i] * s.scale.y;
        const float c = r.c2[i] * s.scale.z;
        radius[i] = 3.0f * std::sqrt(a * a + b * b + c * c);
    }
    box.lo = s.position - radius;
    box.hi = s.position + radius;
    return box;
}

void SplatCloud::finalize() {
    const size_t n = splats.size();
    bounds = Box3{};
    for (int a = 0; a < 3; ++a) {
        aabb_lo[a].resize(n);
        aabb_hi[a].resize(n);
    }
    frames.resize(n);
    max_scale = 0.0f;

    for (size_t i = 0; i < n; ++i) {
        const GaussianSplat& s = splats[i];
        if (s.id != i)
            throw Error(ErrorKind::InvalidValue, "splat ids must be dense 0..N-1");
        for (int a = 0; a < 3; ++a) {
            const float sc = s.scale[a];
            if (!(sc > 0.0f) || !std::isfinite(sc))
                throw Error(ErrorKind::InvalidValue, "splat scale must be positive and finite");
        }
        const Box3 box = splat_aabb(s);
        for (int a = 0; a < 3; ++a) {
            aabb_lo[a][i] = box.lo[a];
            aabb_hi[a][i] = box.hi[a];
        }
        frames[i] = s.orientation.to_mat3();
        // Cloud bounds use the isotropic 3*max(scale) radius, not the tighter
        // rotated box, so they hold whatever the orientation is.
        const float r = 3.0f * std::max({s.scale.x, s.scale.y, s.scale.z});
        bounds.expand(s.position - Vec3{r, r, r});
        bounds.expand(s.position + Vec3{r, r, r});
        max_scale = std::max({max_scale, s.scale.x, s.scale.y, s.scale.z});
    }
}

// ---------------------------------------------------------------------------
// mesh -> splats

SplatCloud splats_from_mesh(const Mesh& mesh, const Texture& texture, int supersample, int threads) {
    if (supersample < 1)
        throw Error(ErrorKind::InvalidValue, "supersample must be >= 1");
    if (texture.width <= 0 || texture.height <= 0)
        throw Error(ErrorKind::InvalidValue, "source texture is empty");

    const int w = texture.width * supersample;
    const int h = texture.height * supersample;
    const auto coverage = detail::compute_uv_coverage(mesh, w, h, threads);

    // Per-triangle UV Jacobian: the map is affine per triangle, so these are
    // exact surface derivatives, not an approximation.
    struct TriDeriv {
        Vec3 dpdu, dpdv;
    };
    std::vector<TriDeriv> deriv(mesh.triangles.size());
    for (size_t t = 0; t < mesh.triangles.size(); ++t) {
        const TriangleRef& tr = mesh.triangles[t];
        const Vec2 a = mesh.uvs[tr.uv[0]];
        const Vec2 duv1 = mesh.uvs[tr.uv[1]] - a;
        const Vec2 duv2 = mesh.uvs[tr.uv[2]] - a;
        const float det = cross(duv1, duv2);
        if (det == 0.0f)
            continue; // never referenced: coverage skips zero-area UV triangles
        const Vec3 p0 = mesh.positions[tr.pos[0]];
        const Vec3 e1 = mesh.positions[tr.pos[1]] - p0;
        const Vec3 e2 = mesh.positions[tr.pos[2]] - p0;
        deriv[t].dpdu = (e1 * duv2.y - e2 * duv1.y) / det;
        deriv[t].dpdv = (e2 * duv1.x - e1 * duv2.x) / det;
    }

    // Slot per covered sample so workers can fill rows independently while
    // ids stay row-major regardless of the thread count.
    std::vector<size_t> row_start(static_cast<size_t>(h) + 1, 0);
    for (int y = 0; y < h; ++y) {
        size_t count = 0;
        const detail::CoverageSample* row = coverage.data() + static_cast<size_t>(y) * w;
        for (int x = 0; x < w; ++x)
            if (row[x].tri >= 0)
                ++count;
        row_start[static_cast<size_t>(y) + 1] = row_start[y] + count;
    }
    const size_t total = row_start.back();
    if (total == 0)
        throw Error(ErrorKind::EmptyCloud, "mesh UVs cover no sample; cannot build splats");

    const float sigma_floor = std::max(kMinSigma, 1e-7f * mesh.bounds().diagonal());
    const float du = 1.0f / static_cast<float>(w);
    const float dv = 1.0f / static_cast<float>(h);

    SplatCloud cloud;
    cloud.splats.resize(total);
    parallel_chunks(static_cast<size_t>(h), threads, [&](size_t y_begin, size_t y_end, int) {
        for (size_t y = y_begin; y < y_end; ++y) {
            const detail::CoverageSample* row = coverage.data() + y * w;
            size_t slot = row_start[y];
            for (int x = 0; x < w; ++x) {
                const detail::CoverageSample& cs = row[x];
                if (cs.tri < 0)
                    continue;
                const Vec2 uv = detail::texel_center_uv(x, static_cast<int>(y), w, h);
                const SurfaceSample ss = interpolate(mesh, cs.tri, cs.bary);
                const Vec4 texel = bilinear_sample(texture, uv.x, uv.y);
                const TriDeriv& d = deriv[cs.tri];

                // One sample step spans |dP| on the surface; a quarter of it
                // as sigma keeps ~2 sigma of overlap with the next sample.
                const float su = std::max(length(d.dpdu) * du * 0.25f, sigma_floor);
                const float sv = std::max(length(d.dpdv) * dv * 0.25f, sigma_floor);
                const float sn = std::max(0.1f * std::min(su, sv), kMinSigma);

                const Vec3 n = ss.normal;
                Vec3 tu = d.dpdu - n * dot(n, d.dpdu);
                const float tu_len = length(tu);
                tu = tu_len > 1e-12f ? tu / tu_len : any_perpendicular(n);
                const Vec3 tv = cross(n, tu);

                GaussianSplat& s = cloud.splats[slot];
                s.position = ss.position;
                s.normal = n;
                s.scale = {su, sv, sn};
                s.orientation = Quat::from_basis(tu, tv, n);
                s.color = {texel.x, texel.y, texel.z};
                s.opacity = texel.w;
                s.id = static_cast<uint32_t>(slot);
                ++slot;
            }
        }
    });

    cloud.finalize();
    return cloud;
}

// ---------------------------------------------------------------------------
// nearest neighbors + densify

namespace {

struct NearestNeighbors {
    std::vector<float> dist;
    std::vector<int32_t> index; // -1 when no other point exists
};

NearestNeighbors nearest_neighbors(const std::vector<Vec3>& pts) {
    const size_t n = pts.size();
    NearestNeighbors nn;
    nn.dist.assign(n, std::numeric_limits<float>::infinity());
    nn.index.assign(n, -1);
    if (n < 2)
        return nn;

    Box3 box;
    for (const Vec3& p : pts)
        box.expand(p);

    // ~1 point per cell on average.
    const int target = std::max(1, static_cast<int>(std::ceil(std::cbrt(static_cast<double>(n)))));
    const float ext = box.max_extent();
    const float cell = ext > 0.0f ? ext / static_cast<float>(target) : 1.0f;

    int dims[3];
    for (int a = 0; a < 3; ++a)
        dims[a] = std::max(1, std::min(target, static_cast<int>(std::floor(box.extent()[a] / cell)) + 1));

    auto cell_of = [&](const Vec3& p, int out[3]) {
        for (int a = 0; a < 3; ++a) {
            int c = static_cast<int>(std::floor((p[a] - box.lo[a]) / cell));
            out[a] = std::clamp(c, 0, dims[a] - 1);
        }
    };
    auto cell_index = [&](int cx, int cy, int cz) {
        return (static_cast<size_t>(cz) * dims[1] + cy) * dims[0] + cx;
    };

    const size_t cell_count = static_cast<size_t>(dims[0]) * dims[1] * dims[2];
    std::vector<uint32_t> offsets(cell_count + 1, 0);
    std::vector<std::array<int, 3>> coords(n);
    for (size_t i = 0; i < n; ++i) {
        cell_of(pts[i], coords[i].data());
        ++offsets[cell_index(coords[i][0], coords[i][1], coords[i][2]) + 1];
    }
    for (size_t c = 0; c < cell_count; ++c)
        offsets[c + 1] += offsets[c];
    std::vector<uint32_t> ids(n);
    {
        std::vector<uint32_t> cursor(offsets.begin(), offsets.end() - 1);
        for (size_t i = 0; i < n; ++i)
            ids[cursor[cell_index(coords[i][0], coords[i][1], coords[i][2])]++] = static_cast<uint32_t>(i);
    }

    for (size_t i = 0; i < n; ++i) {
        const Vec3 p = pts[i];
        const int cx = coords[i][0], cy = coords[i][1], cz = coords[i][2];
        const int ring_max = std::max({cx, dims[0] - 1 - cx, cy, dims[1] - 1 - cy, cz, dims[2] - 1 - cz});
        float best = std::numeric_limits<float>::infinity();
        int32_t best_id = -1;
        for (int k = 0; k <= ring_max; ++k) {
            // After finishing ring k-1, any unvisited point sits in ring
            // >= k and is at least (k-1)*cell away.
            if (best_id >= 0 && best <= static_cast<float>(k - 1) * cell)
                break;
            for (int dz = -k; dz <= k; ++dz) {
                const int z = cz + dz;
                if (z < 0 || z >= dims[2])
                    continue;
                for (int dy = -k; dy <= k; ++dy) {
                    const int y = cy + dy;
                    if (y < 0 || y >= dims[1])
                        continue;
                    const bool face_zy = std::abs(dz) == k || std::abs(dy) == k;
                    for (int dx = -k; dx <= k; ++dx) {
                        if (!face_zy && std::abs(dx) != k)
                            continue; // interior cells were visited in earlier rings
                        const int x = cx + dx;
                        if (x < 0 || x >= dims[0])
                            continue;
                        const size_t c = cell_index(x, y, z);
                        for (uint32_t s = offsets[c]; s < offsets[c + 1]; ++s) {
                            const uint32_t j = ids[s];
                            if (j == i)
                                continue;
                            const float d = length(pts[j] - p);
                            if (d < best || (d == best && static_cast<int32_t>(j) < best_id)) {
                                best = d;
                                best_id = static_cast<int32_t>(j);
                            }
                        }
                    }
                }
            }
        }
        nn.dist[i] = best;
        nn.index[i] = best_id;
    }
    return nn;
}

} // namespace

std::vector<float> nn_distances(const std::vector<Vec3>& points) {
    return nearest_neighbors(points).dist;
}

float median_nn_distance(const SplatCloud& cloud) {
    if (cloud.size() < 2)
        return 0.0f;
    std::vector<Vec3> pts(cloud.size());
    for (size_t i = 0; i < cloud.size(); ++i)
        pts[i] = cloud.splats[i].position;
    std::vector<float> d = nn_distances(pts);
    auto mid = d.begin() + static_cast<ptrdiff_t>(d.size() / 2);
    std::nth_element(d.begin(), mid, d.end());
    return *mid;
}

namespace {

GaussianSplat midpoint_splat(const GaussianSplat& a, const GaussianSplat& b, uint32_t id) {
    GaussianSplat m;
    m.position = (a.position + b.position) * 0.5f;
    Vec3 n = a.normal + b.normal;
    m.normal = length(n) > 1e-8f ? normalized(n) : a.normal;
    m.scale = max(a.scale, b.scale);
    Quat qb = b.orientation;
    const float qdot = a.orientation.w * qb.w + a.orientation.x * qb.x + a.orientation.y * qb.y +
                       a.orientation.z * qb.z;
    if (qdot < 0.0f)
        qb = {-qb.w, -qb.x, -qb.y, -qb.z};
    Quat q{a.orientation.w + qb.w, a.orientation.x + qb.x, a.orientation.y + qb.y,
           a.orientation.z + qb.z};
    m.orientation = q.norm() > 1e-8f ? q.normalized() : a.orientation;
    m.color = (a.color + b.color) * 0.5f;
    m.opacity = 0.5f * (a.opacity + b.opacity);
    m.id = id;
    return m;
}

} // namespace

DensifyResult densify(const SplatCloud& cloud, float spacing, int max_passes) {
    if (!(spacing > 0.0f) || !std::isfinite(spacing))
        throw Error(ErrorKind::InvalidValue, "densify spacing must be positive");
    if (max_passes < 1)
        throw Error(ErrorKind::InvalidValue, "densify pass cap must be >= 1");

    DensifyResult res;
    res.cloud.splats = cloud.splats;

    std::vector<Vec3> pts(res.cloud.splats.size());
    for (size_t i = 0; i < pts.size(); ++i)
        pts[i] = res.cloud.splats[i].position;

    for (int pass = 1; pass <= max_passes; ++pass) {
        const NearestNeighbors nn = nearest_neighbors(pts);

        std::vector<std::pair<uint32_t, uint32_t>> pairs;
        for (size_t i = 0; i < pts.size(); ++i) {
            if (nn.index[i] < 0 || !(nn.dist[i] > spacing) || !std::isfinite(nn.dist[i]))
                continue;
            const uint32_t j = static_cast<uint32_t>(nn.index[i]);
            pairs.emplace_back(std::min<uint32_t>(static_cast<uint32_t>(i), j),
                               std::max<uint32_t>(static_cast<uint32_t>(i), j));
        }
        std::sort(pairs.begin(), pairs.end());
        pairs.erase(std::unique(pairs.begin(), pairs.end()), pairs.end());

        if (pairs.empty()) {
            float gap = 0.0f;
            for (float d : nn.dist)
                if (std::isfinite(d))
                    gap = std::max(gap, d);
            res.max_gap = gap;
            res.cloud.finalize();
            return res;
        }

        res.passes = pass;
        for (const auto& [i, j] : pairs) {
            const uint32_t id = static_cast<uint32_t>(res.cloud.splats.size());
            res.cloud.splats.push_back(midpoint_splat(res.cloud.splats[i], res.cloud.splats[j], id));
            pts.push_back(res.cloud.splats.back().position);
            ++res.inserted;
        }
    }

    // Pass cap reached; report whether gaps remain.
    const NearestNeighbors nn = nearest_neighbors(pts);
    float gap = 0.0f;
    for (float d : nn.dist)
        if (std::isfinite(d))
            gap = std::max(gap, d);
    res.max_gap = gap;
    res.hit_pass_cap = gap > spacing;
    res.cloud.finalize();
    return res;
}

// ---------------------------------------------------------------------------
// 3DGS PLY

namespace {

constexpr const char* kRequiredProps[17] = {
    "x",       "y",       "z",       "nx",      "ny",      "nz",    "f_dc_0", "f_dc_1", "f_dc_2",
    "opacity", "scale_0", "scale_1", "scale_2", "rot_0",   "rot_1", "rot_2",  "rot_3"};

size_t ply_type_size(std::string_view t) {
    if (t == "char" || t == "uchar" || t == "int8" || t == "uint8")
        return 1;
    if (t == "short" || t == "ushort" || t == "int16" || t == "uint16")
        return 2;
    if (t == "int" || t == "uint" || t == "int32" || t == "uint32" || t == "float" || t == "float32")
        return 4;
    if (t == "double" || t == "float64" || t == "int64" || t == "uint64")
        return 8;
    return 0;
}

bool ply_is_float(std::string_view t) { return t == "float" || t == "float32"; }

std::vector<std::string_view> split_ws(std::string_view s) {
    std::vector<std::string_view> out;
    size_t i = 0;
    while (i < s.size()) {
        while (i < s.size() && (s[i] == ' ' || s[i] == '\t'))
            ++i;
        size_t j = i;
        while (j < s.size() && s[j] != ' ' && s[j] != '\t')
            ++j;
        if (j > i)
            out.push_back(s.substr(i, j - i));
        i = j;
    }
    return out;
}

std::string canonical_ply_header(size_t count) {
    std::string h = "ply\nformat binary_little_endian 1.0\nelement vertex " + std::to_string(count) + "\n";
    for (const char* p : kRequiredProps) {
        h += "property float ";
        h += p;
        h += "\n";
    }
    h += "end_header\n";
    return h;
}

void write_raw_body(const std::vector<RawSplatRecord>& records, std::ostream& os) {
    for (const RawSplatRecord& r : records)
        os.write(reinterpret_cast<const char*>(r.data()), sizeof(float) * r.size());
}

} // namespace

SplatCloud parse_splat_ply(std::istream& is, std::vector<RawSplatRecord>* raw_out) {
    auto next_line = [&](std::string& line, size_t& lineno) {
        if (!std::getline(is, line))
            throw Error(ErrorKind::BadHeader, "header ends before end_header", lineno);
        ++lineno;
        if (!line.empty() && line.back() == '\r')
            line.pop_back();
    };

    size_t lineno = 0;
    std::string line;
    next_line(line, lineno);
    if (line != "ply")
        throw Error(ErrorKind::BadHeader, "not a PLY file", lineno);

    bool format_seen = false;
    bool in_vertex = false;
    bool vertex_seen = false;
    uint64_t vertex_count = 0;
    size_t stride = 0;
    ptrdiff_t prop_offset[17];
    std::fill(std::begin(prop_offset), std::end(prop_offset), -1);

    for (;;) {
        next_line(line, lineno);
        const auto f = split_ws(line);
        if (f.empty() || f[0] == "comment" || f[0] == "obj_info")
            continue;
        if (f[0] == "end_header")
            break;
        if (f[0] == "format") {
            if (f.size() < 3 || f[1] != "binary_little_endian" || f[2] != "1.0")
                throw Error(ErrorKind::BadHeader, "only binary_little_endian 1.0 is supported", lineno);
            format_seen = true;
            continue;
        }
        if (f[0] == "element") {
            if (f.size() < 3)
                throw Error(ErrorKind::BadHeader, "malformed element line", lineno);
            if (f[1] == "vertex") {
                if (vertex_seen)
                    throw Error(ErrorKind::BadHeader, "duplicate vertex element", lineno);
                if (stride != 0 || in_vertex)
                    throw Error(ErrorKind::BadHeader, "vertex must be the first element", lineno);
                vertex_seen = in_vertex = true;
                uint64_t c = 0;
                for (char ch : f[2]) {
                    if (ch < '0' || ch > '9')
                        throw Error(ErrorKind::BadHeader, "bad vertex count", lineno);
                    c = c * 10 + static_cast<uint64_t>(ch - '0');
                }
                if (c > (1ull << 31))
                    throw Error(ErrorKind::BadHeader, "implausible vertex count", lineno);
                vertex_count = c;
            } else {
                if (!vertex_seen)
                    throw Error(ErrorKind::BadHeader, "vertex must be the first element", lineno);
                in_vertex = false; // later elements trail the vertex data; ignored
            }
            continue;
        }
        if (f[0] == "property") {
            if (!in_vertex)
                continue;
            if (f.size() >= 2 && f[1] == "list")
                throw Error(ErrorKind::BadHeader, "list properties are not supported on vertex", lineno);
            if (f.size() < 3)
                throw Error(ErrorKind::BadHeader, "malformed property line", lineno);
            const size_t size = ply_type_size(f[1]);
            if (size == 0)
                throw Error(ErrorKind::BadHeader, "unknown property type '" + std::string(f[1]) + "'", lineno);
            for (int k = 0; k < 17; ++k) {
                if (f[2] == kRequiredProps[k]) {
                    if (!ply_is_float(f[1]))
                        throw Error(ErrorKind::BadHeader,
                                    "property '" + std::string(f[2]) + "' must be float", lineno);
                    prop_offset[k] = static_cast<ptrdiff_t>(stride);
                }
            }
            stride += size;
            continue;
        }
        throw Error(ErrorKind::BadHeader, "unexpected header line '" + line + "'", lineno);
    }

    if (!format_seen)
        throw Error(ErrorKind::BadHeader, "missing format line");
    if (!vertex_seen)
        throw Error(ErrorKind::BadHeader, "missing vertex element");
    for (int k = 0; k < 17; ++k)
        if (prop_offset[k] < 0)
            throw Error(ErrorKind::MissingProperty,
                        std::string("vertex is missing property '") + kRequiredProps[k] + "'");
    if (vertex_count == 0)
        throw Error(ErrorKind::EmptyCloud, "PLY declares zero vertices");

    std::vector<char> body(static_cast<size_t>(vertex_count) * stride);
    is.read(body.data(), static_cast<std::streamsize>(body.size()));
    if (static_cast<size_t>(is.gcount()) != body.size())
        throw Error(ErrorKind::TruncatedBody, "vertex data ends after " + std::to_string(is.gcount()) +
                                                  " of " + std::to_string(body.size()) + " bytes");

    SplatCloud cloud;
    cloud.splats.resize(vertex_count);
    if (raw_out)
        raw_out->resize(vertex_count);

    for (size_t i = 0; i < vertex_count; ++i) {
        const char* rec = body.data() + i * stride;
        RawSplatRecord raw;
        for (int k = 0; k < 17; ++k)
            std::memcpy(&raw[k], rec + prop_offset[k], sizeof(float));
        for (float v : raw)
            if (!std::isfinite(v))
                throw Error(ErrorKind::InvalidValue, "non-finite value in record " + std::to_string(i));
        if (raw_out)
            (*raw_out)[i] = raw;

        GaussianSplat& s = cloud.splats[i];
        s.position = {raw[0], raw[1], raw[2]};
        Vec3 n{raw[3], raw[4], raw[5]};
        const float nlen = length(n);
        if (nlen < 1e-8f)
            throw Error(ErrorKind::InvalidValue, "zero-length normal in record " + std::to_string(i));
        s.normal = n / nlen;
        s.color = {clamp01(0.5f + kShC0 * raw[6]), clamp01(0.5f + kShC0 * raw[7]),
                   clamp01(0.5f + kShC0 * raw[8])};
        s.opacity = 1.0f / (1.0f + std::exp(-raw[9]));
        // exp() can underflow to zero for extreme inputs; keep sigma positive.
        s.scale = {std::max(std::exp(raw[10]), kMinSigma), std::max(std::exp(raw[11]), kMinSigma),
                   std::max(std::exp(raw[12]), kMinSigma)};
        for (int a = 0; a < 3; ++a)
            if (!std::isfinite(s.scale[a]))
                throw Error(ErrorKind::InvalidValue, "scale overflows in record " + std::to_string(i));
        Quat q{raw[13], raw[14], raw[15], raw[16]};
        if (q.norm() < 1e-8f)
            throw Error(ErrorKind::InvalidValue, "zero-length rotation in record " + std::to_string(i));
        s.orientation = q.normalized();
        s.id = static_cast<uint32_t>(i);
    }

    cloud.finalize();
    return cloud;
}

SplatCloud load_splat_ply(const std::string& path, std::vector<RawSplatRecord>* raw_out) {
    std::ifstream is(path, std::ios::binary);
    if (!is)
        throw Error(ErrorKind::IoError, "cannot open '" + path + "'");
    return parse_splat_ply(is, raw_out);
}

void serialize_splat_ply(const SplatCloud& cloud, std::ostream& os) {
    std::vector<RawSplatRecord> records(cloud.size());
    for (size_t i = 0; i < cloud.size(); ++i) {
        const GaussianSplat& s = cloud.splats[i];
        RawSplatRecord& r = records[i];
        r[0] = s.position.x;
        r[1] = s.position.y;
        r[2] = s.position.z;
        r[3] = s.normal.x;
        r[4] = s.normal.y;
        r[5] = s.normal.z;
        for (int c = 0; c < 3; ++c)
            r[6 + c] = (s.color[c] - 0.5f) / kShC0;
        const float o = std::clamp(s.opacity, 1e-6f, 1.0f - 1e-6f);
        r[9] = std::log(o / (1.0f - o));
        for (int c = 0; c < 3; ++c)
            r[10 + c] = std::log(s.scale[c]);
        r[13] = s.orientation.w;
        r[14] = s.orientation.x;
        r[15] = s.orientation.y;
        r[16] = s.orientation.z;
    }
    const std::string header = canonical_ply_header(records.size());
    os.write(header.data(), static_cast<std::streamsize>(header.size()));
    write_raw_body(records, os);
    if (!os)
        throw Error(ErrorKind::IoError, "failed writing PLY");
}

void serialize_splat_ply_raw(const std::vector<RawSplatRecord>& records, std::ostream& os) {
    const std::string header = canonical_ply_header(records.size());
    os.write(header.data(), static_cast<std::streamsize>(header.size()));
    write_raw_body(records, os);
    if (!os)
        throw Error(ErrorKind::IoError, "failed writing PLY");
}

void save_splat_ply(const SplatCloud& cloud, const std::string& path) {
    std::ofstream os(path, std::ios::binary);
    if (!os)
        throw Error(ErrorKind::IoError, "cannot open '" + path + "' for writing");
    serialize_splat_ply(cloud, os);
}

} // namespace splatbake
