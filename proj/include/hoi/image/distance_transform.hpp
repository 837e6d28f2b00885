#pragma once

#include "hoi/image/image.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

namespace hoi {

/// Euclidean distance (pixels) from every pixel center to the nearest
/// foreground pixel center; zero on the foreground.
struct DistanceField {
    int width = 0, height = 0;
    std::vector<double> values;

    double at(int x, int y) const { return values[std::size_t(y) * width + x]; }

    struct Sample {
        double value;
        Vec2 gradient;
    };

    /// Bilinear read at continuous pixel coordinates (pixel centers at
    /// i + 0.5). Beyond the outermost centers the border value is extended
    /// and the Euclidean distance to the center box is added.
    Sample sample(const Vec2& uv) const {
        const Vec2 lo(0.5, 0.5), hi(width - 0.5, height - 0.5);
        const Vec2 q = uv.cwiseMax(lo).cwiseMin(hi);
        const Vec2 outside = uv - q;
        const double gx = q.x() - 0.5, gy = q.y() - 0.5;
        const int x0 = std::min(static_cast<int>(std::floor(gx)), std::max(width - 2, 0));
        const int y0 = std::min(static_cast<int>(std::floor(gy)), std::max(height - 2, 0));
        const int x1 = std::min(x0 + 1, width - 1), y1 = std::min(y0 + 1, height - 1);
        const double tx = x1 == x0 ? 0.0 : gx - x0, ty = y1 == y0 ? 0.0 : gy - y0;
        const double v00 = at(x0, y0), v10 = at(x1, y0), v01 = at(x0, y1), v11 = at(x1, y1);
        Sample s;
        s.value = (1 - ty) * ((1 - tx) * v00 + tx * v10) + ty * ((1 - tx) * v01 + tx * v11);
        s.gradient = Vec2((1 - ty) * (v10 - v00) + ty * (v11 - v01), (1 - tx) * (v01 - v00) + tx * (v11 - v10));
        if (x1 == x0 || uv.x() != q.x()) s.gradient.x() = 0.0;
        if (y1 == y0 || uv.y() != q.y()) s.gradient.y() = 0.0;
        const double d = outside.norm();
        if (d > 0.0) {
            s.value += d;
            s.gradient += outside / d;
        }
        return s;
    }
};

namespace detail {

// Lower envelope of parabolas: exact 1D squared distance transform.
// Background cells enter as a large finite value.
inline void squared_edt_1d(const std::vector<double>& f, std::vector<double>& d) {
    const int n = static_cast<int>(f.size());
    std::vector<int> v(n);
    std::vector<double> z(n + 1);
    int k = 0;
    v[0] = 0;
    z[0] = -std::numeric_limits<double>::infinity();
    z[1] = std::numeric_limits<double>::infinity();
    auto cross = [&](int q, int p) { return ((f[q] + double(q) * q) - (f[p] + double(p) * p)) / (2.0 * (q - p)); };
    for (int q = 1; q < n; ++q) {
        double s = cross(q, v[k]);
        while (k > 0 && s <= z[k]) {
            --k;
            s = cross(q, v[k]);
        }
        ++k;
        v[k] = q;
        z[k] = s;
        z[k + 1] = std::numeric_limits<double>::infinity();
    }
    k = 0;
    for (int q = 0; q < n; ++q) {
        while (z[k + 1] < q) ++k;
        const double dq = q - v[k];
        d[q] = dq * dq + f[v[k]];
    }
}

}  // namespace detail

inline DistanceField distance_transform(const BinaryImage& mask) {
    require(mask.count() > 0, "distance transform of an empty mask");
    const int w = mask.width, h = mask.height;
    const double far = 1e20;
    std::vector<double> sq(std::size_t(w) * h);
    for (std::size_t i = 0; i < sq.size(); ++i) sq[i] = mask.data[i] ? 0.0 : far;
    std::vector<double> f(std::max(w, h)), d(std::max(w, h));
    for (int x = 0; x < w; ++x) {
        f.resize(h);
        d.resize(h);
        for (int y = 0; y < h; ++y) f[y] = sq[std::size_t(y) * w + x];
        detail::squared_edt_1d(f, d);
        for (int y = 0; y < h; ++y) sq[std::size_t(y) * w + x] = d[y];
    }
    for (int y = 0; y < h; ++y) {
        f.assign(sq.begin() + std::size_t(y) * w, sq.begin() + std::size_t(y + 1) * w);
        d.resize(w);
        detail::squared_edt_1d(f, d);
        std::copy(d.begin(), d.end(), sq.begin() + std::size_t(y) * w);
    }
    DistanceField out{w, h, std::move(sq)};
    for (auto& v : out.values) v = std::sqrt(v);
    return out;
}

}  // namespace hoi
