#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>

namespace splatbake {

struct Vec2 {
    float x = 0.f, y = 0.f;
};

inline Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
inline Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
inline Vec2 operator*(Vec2 a, float s) { return {a.x * s, a.y * s}; }
inline float cross(Vec2 a, Vec2 b) { return a.x * b.y - a.y * b.x; }

struct Vec3 {
    float x = 0.f, y = 0.f, z = 0.f;

    float& operator[](int i) { return (&x)[i]; }
    float operator[](int i) const { return (&x)[i]; }
};

inline Vec3 operator+(Vec3 a, Vec3 b) { return {a.x + b.x, a.y + b.y, a.z + b.z}; }
inline Vec3 operator-(Vec3 a, Vec3 b) { return {a.x - b.x, a.y - b.y, a.z - b.z}; }
inline Vec3 operator*(Vec3 a, float s) { return {a.x * s, a.y * s, a.z * s}; }
inline Vec3 operator*(float s, Vec3 a) { return a * s; }
inline Vec3 operator/(Vec3 a, float s) { return {a.x / s, a.y / s, a.z / s}; }
inline Vec3& operator+=(Vec3& a, Vec3 b) { a = a + b; return a; }
inline bool operator==(Vec3 a, Vec3 b) { return a.x == b.x && a.y == b.y && a.z == b.z; }

inline float dot(Vec3 a, Vec3 b) { return a.x * b.x + a.y * b.y + a.z * b.z; }
inline Vec3 cross(Vec3 a, Vec3 b) {
    return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}
inline float length_sq(Vec3 a) { return dot(a, a); }
inline float length(Vec3 a) { return std::sqrt(dot(a, a)); }
inline Vec3 normalized(Vec3 a) { return a / length(a); }
inline Vec3 min(Vec3 a, Vec3 b) { return {std::min(a.x, b.x), std::min(a.y, b.y), std::min(a.z, b.z)}; }
inline Vec3 max(Vec3 a, Vec3 b) { return {std::max(a.x, b.x), std::max(a.y, b.y), std::max(a.z, b.z)}; }

struct Vec4 {
    float x = 0.f, y = 0.f, z = 0.f, w = 0.f;
};

/// Column-major 3x3 matrix; columns are the images of the local basis axes.
struct Mat3 {
    Vec3 c0, c1, c2;

    Vec3 mul(Vec3 v) const { return c0 * v.x + c1 * v.y + c2 * v.z; }
    // R is orthonormal for rotation use, so transpose == inverse.
    Vec3 mul_transposed(Vec3 v) const { return {dot(c0, v), dot(c1, v), dot(c2, v)}; }
};

struct Quat {
    float w = 1.f, x = 0.f, y = 0.f, z = 0.f;

    float norm() const { return std::sqrt(w * w + x * x + y * y + z * z); }

    Quat normalized() const {
        float n = norm();
        if (n <= 0.f) return {1.f, 0.f, 0.f, 0.f};
        return {w / n, x / n, y / n, z / n};
    }

    Mat3 to_mat3() const {
        float xx = x * x, yy = y * y, zz = z * z;
        float xy = x * y, xz = x * z, yz = y * z;
        float wx = w * x, wy = w * y, wz = w * z;
        Mat3 m;
        m.c0 = {1.f - 2.f * (yy + zz), 2.f * (xy + wz), 2.f * (xz - wy)};
        m.c1 = {2.f * (xy - wz), 1.f - 2.f * (xx + zz), 2.f * (yz + wx)};
        m.c2 = {2.f * (xz + wy), 2.f * (yz - wx), 1.f - 2.f * (xx + yy)};
        return m;
    }

    /// Build from an orthonormal basis (columns c0,c1,c2 of a right-handed rotation).
    static Quat from_basis(Vec3 c0, Vec3 c1, Vec3 c2) {
        // Shepperd's method on the column-major matrix.
        float m00 = c0.x, m10 = c0.y, m20 = c0.z;
        float m01 = c1.x, m11 = c1.y, m21 = c1.z;
        float m02 = c2.x, m12 = c2.y, m22 = c2.z;
        float tr = m00 + m11 + m22;
        Quat q;
        if (tr > 0.f) {
            float s = std::sqrt(tr + 1.f) * 2.f;
            q.w = 0.25f * s;
            q.x = (m21 - m12) / s;
            q.y = (m02 - m20) / s;
            q.z = (m10 - m01) / s;
        } else if (m00 > m11 && m00 > m22) {
            float s = std::sqrt(1.f + m00 - m11 - m22) * 2.f;
            q.w = (m21 - m12) / s;
            q.x = 0.25f * s;
            q.y = (m01 + m10) / s;
            q.z = (m02 + m20) / s;
        } else if (m11 > m22) {
            float s = std::sqrt(1.f + m11 - m00 - m22) * 2.f;
            q.w = (m02 - m20) / s;
            q.x = (m01 + m10) / s;
            q.y = 0.25f * s;
            q.z = (m12 + m21) / s;
        } else {
            float s = std::sqrt(1.f + m22 - m00 - m11) * 2.f;
            q.w = (m10 - m01) / s;
            q.x = (m02 + m20) / s;
            q.y = (m12 + m21) / s;
            q.z = 0.25f * s;
        }
        return q.normalized();
    }
};

struct Box3 {
    Vec3 lo{std::numeric_limits<float>::max(), std::numeric_limits<float>::max(),
            std::numeric_limits<float>::max()};
    Vec3 hi{std::numeric_limits<float>::lowest(), std::numeric_limits<float>::lowest(),
            std::numeric_limits<float>::lowest()};

    bool empty() const { return lo.x > hi.x; }
    void expand(Vec3 p) { lo = min(lo, p); hi = max(hi, p); }
    void expand(const Box3& b) { lo = min(lo, b.lo); hi = max(hi, b.hi); }
    Vec3 extent() const { return hi - lo; }
    Vec3 center() const { return (lo + hi) * 0.5f; }
    float max_extent() const { Vec3 e = extent(); return std::max(e.x, std::max(e.y, e.z)); }
    float diagonal() const { return length(extent()); }
    bool contains(Vec3 p) const {
        return p.x >= lo.x && p.x <= hi.x && p.y >= lo.y && p.y <= hi.y && p.z >= lo.z && p.z <= hi.z;
    }
};

struct RGBA8 {
    uint8_t r = 0, g = 0, b = 0, a = 0;
    bool operator==(const RGBA8&) const = default;
};

} // namespace splatbake
