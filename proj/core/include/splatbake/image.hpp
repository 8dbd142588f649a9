#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "splatbake/vec.hpp"

namespace splatbake {

/// 8-bit RGBA image. Rows are stored top-first (row 0 is the top of the
/// image), matching PNG order. UV space follows the OBJ convention with
/// v = 0 at the bottom, so texel (x, y) covers the UV center
/// u = (x + 0.5) / width, v = 1 - (y + 0.5) / height.
struct Texture {
    int width = 0;
    int height = 0;
    std::vector<uint8_t> data; // width * height * 4 bytes, row-major

    static Texture solid(int w, int h, RGBA8 color);

    RGBA8 get(int x, int y) const {
        const uint8_t* p = data.data() + (static_cast<size_t>(y) * width + x) * 4;
        return {p[0], p[1], p[2], p[3]};
    }
    void set(int x, int y, RGBA8 c) {
        uint8_t* p = data.data() + (static_cast<size_t>(y) * width + x) * 4;
        p[0] = c.r; p[1] = c.g; p[2] = c.b; p[3] = c.a;
    }
    bool same_dims(const Texture& o) const { return width == o.width && height == o.height; }
};

/// Bilinear sample at UV with edge clamping. Returns RGBA in [0,1].
/// At exact texel centers this reproduces the texel value.
Vec4 bilinear_sample(const Texture& tex, float u, float v);

Texture load_png(const std::string& path);
void save_png(const Texture& tex, const std::string& path);

} // namespace splatbake
