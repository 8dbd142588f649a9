#include "splatbake/raster.hpp"

#include <atomic>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>

#include "splatbake/error.hpp"
#include "splatbake/threading.hpp"
#include "uv_coverage.hpp"

namespace splatbake {

ProjectionMap rasterize_projection_map(const Mesh& mesh, int width, int height, int threads) {
    if (width <= 0 || height <= 0)
        throw Error(ErrorKind::InvalidValue, "projection map size must be positive");

    const auto coverage = detail::compute_uv_coverage(mesh, width, height, threads);

    ProjectionMap map;
    map.width = width;
    map.height = height;
    map.texels.assign(coverage.size(), ProjTexel{});

    std::atomic<size_t> valid{0};
    parallel_chunks(coverage.size(), threads, [&](size_t begin, size_t end, int) {
        size_t local = 0;
        for (size_t i = begin; i < end; ++i) {
            const detail::CoverageSample& cs = coverage[i];
            if (cs.tri < 0)
                continue;
            const SurfaceSample s = interpolate(mesh, cs.tri, cs.bary);
            map.texels[i] = {s.position, s.normal, 1};
            ++local;
        }
        valid.fetch_add(local, std::memory_order_relaxed);
    });
    map.valid_count = valid.load();

    if (map.valid_count == 0)
        throw Error(ErrorKind::NoCoverage, "mesh UVs cover no texel center");
    return map;
}

namespace {

constexpr char kMagic[4] = {'P', 'M', 'A', 'P'};

void put_u32(std::ostream& os, uint32_t v) {
    unsigned char b[4] = {static_cast<unsigned char>(v), static_cast<unsigned char>(v >> 8),
                          static_cast<unsigned char>(v >> 16), static_cast<unsigned char>(v >> 24)};
    os.write(reinterpret_cast<const char*>(b), 4);
}

uint32_t get_u32(std::istream& is) {
    unsigned char b[4];
    is.read(reinterpret_cast<char*>(b), 4);
    return static_cast<uint32_t>(b[0]) | static_cast<uint32_t>(b[1]) << 8 |
           static_cast<uint32_t>(b[2]) << 16 | static_cast<uint32_t>(b[3]) << 24;
}

} // namespace

void write_pmap(const ProjectionMap& map, std::ostream& os) {
    os.write(kMagic, 4);
    put_u32(os, static_cast<uint32_t>(map.width));
    put_u32(os, static_cast<uint32_t>(map.height));
    std::vector<char> rec(1 + 6 * sizeof(float));
    for (const ProjTexel& t : map.texels) {
        rec[0] = static_cast<char>(t.valid ? 1 : 0);
        const float f[6] = {t.position.x, t.position.y, t.position.z, t.normal.x, t.normal.y, t.normal.z};
        std::memcpy(rec.data() + 1, f, sizeof(f));
        os.write(rec.data(), static_cast<std::streamsize>(rec.size()));
    }
    if (!os)
        throw Error(ErrorKind::IoError, "failed writing projection map");
}

ProjectionMap read_pmap(std::istream& is) {
    char magic[4];
    is.read(magic, 4);
    if (!is || std::memcmp(magic, kMagic, 4) != 0)
        throw Error(ErrorKind::MalformedRecord, "not a projection map (bad magic)");
    const uint32_t w = get_u32(is);
    const uint32_t h = get_u32(is);
    if (!is || w == 0 || h == 0 || w > (1u << 20) || h > (1u << 20))
        throw Error(ErrorKind::MalformedRecord, "projection map has implausible dimensions");

    ProjectionMap map;
    map.width = static_cast<int>(w);
    map.height = static_cast<int>(h);
    map.texels.resize(static_cast<size_t>(w) * h);
    std::vector<char> rec(1 + 6 * sizeof(float));
    for (ProjTexel& t : map.texels) {
        is.read(rec.data(), static_cast<std::streamsize>(rec.size()));
        if (!is)
            throw Error(ErrorKind::TruncatedBody, "projection map ends mid-record");
        t.valid = rec[0] ? 1 : 0;
        float f[6];
        std::memcpy(f, rec.data() + 1, sizeof(f));
        t.position = {f[0], f[1], f[2]};
        t.normal = {f[3], f[4], f[5]};
        if (t.valid)
            ++map.valid_count;
    }
    return map;
}

void save_pmap(const ProjectionMap& map, const std::string& path) {
    std::ofstream os(path, std::ios::binary);
    if (!os)
        throw Error(ErrorKind::IoError, "cannot open '" + path + "' for writing");
    write_pmap(map, os);
}

ProjectionMap load_pmap(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is)
        throw Error(ErrorKind::IoError, "cannot open '" + path + "'");
    return read_pmap(is);
}

} // namespace splatbake
