#include "splatbake/image.hpp"

#include <png.h>

#include <cmath>
#include <cstring>

#include "splatbake/error.hpp"

namespace splatbake {

Texture Texture::solid(int w, int h, RGBA8 color) {
    Texture t;
    t.width = w;
    t.height = h;
    t.data.resize(static_cast<size_t>(w) * h * 4);
    for (size_t i = 0; i < t.data.size(); i += 4) {
        t.data[i + 0] = color.r;
        t.data[i + 1] = color.g;
        t.data[i + 2] = color.b;
        t.data[i + 3] = color.a;
    }
    return t;
}

Vec4 bilinear_sample(const Texture& tex, float u, float v) {
    // v flip: row 0 is the image top, v = 0 the UV bottom.
    float fx = u * static_cast<float>(tex.width) - 0.5f;
    float fy = (1.f - v) * static_cast<float>(tex.height) - 0.5f;
    float flx = std::floor(fx);
    float fly = std::floor(fy);
    int x0 = static_cast<int>(flx);
    int y0 = static_cast<int>(fly);
    float ax = fx - flx;
    float ay = fy - fly;

    auto clampi = [](int i, int n) { return i < 0 ? 0 : (i >= n ? n - 1 : i); };
    int x0c = clampi(x0, tex.width), x1c = clampi(x0 + 1, tex.width);
    int y0c = clampi(y0, tex.height), y1c = clampi(y0 + 1, tex.height);

    RGBA8 c00 = tex.get(x0c, y0c), c10 = tex.get(x1c, y0c);
    RGBA8 c01 = tex.get(x0c, y1c), c11 = tex.get(x1c, y1c);

    auto lerp_channel = [&](uint8_t a00, uint8_t a10, uint8_t a01, uint8_t a11) {
        float top = static_cast<float>(a00) * (1.f - ax) + static_cast<float>(a10) * ax;
        float bot = static_cast<float>(a01) * (1.f - ax) + static_cast<float>(a11) * ax;
        return (top * (1.f - ay) + bot * ay) / 255.f;
    };
    return {lerp_channel(c00.r, c10.r, c01.r, c11.r), lerp_channel(c00.g, c10.g, c01.g, c11.g),
            lerp_channel(c00.b, c10.b, c01.b, c11.b), lerp_channel(c00.a, c10.a, c01.a, c11.a)};
}

Texture load_png(const std::string& path) {
    png_image img;
    std::memset(&img, 0, sizeof(img));
    img.version = PNG_IMAGE_VERSION;

    if (!png_image_begin_read_from_file(&img, path.c_str()))
        throw Error(ErrorKind::IoError, "cannot read PNG '" + path + "': " + img.message);

    img.format = PNG_FORMAT_RGBA;
    Texture tex;
    tex.width = static_cast<int>(img.width);
    tex.height = static_cast<int>(img.height);
    tex.data.resize(PNG_IMAGE_SIZE(img));

    if (!png_image_finish_read(&img, nullptr, tex.data.data(), 0, nullptr)) {
        png_image_free(&img);
        throw Error(ErrorKind::IoError, "cannot decode PNG '" + path + "': " + img.message);
    }
    return tex;
}

void save_png(const Texture& tex, const std::string& path) {
    if (tex.width <= 0 || tex.height <= 0)
        throw Error(ErrorKind::IoError, "refusing to write empty texture to '" + path + "'");

    png_image img;
    std::memset(&img, 0, sizeof(img));
    img.version = PNG_IMAGE_VERSION;
    img.width = static_cast<png_uint_32>(tex.width);
    img.height = static_cast<png_uint_32>(tex.height);
    img.format = PNG_FORMAT_RGBA;

    if (!png_image_write_to_file(&img, path.c_str(), 0, tex.data.data(), 0, nullptr))
        throw Error(ErrorKind::IoError, "cannot write PNG '" + path + "': " + img.message);
}

} // namespace splatbake
