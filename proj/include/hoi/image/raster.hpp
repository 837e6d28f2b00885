#pragma once

#include "hoi/camera.hpp"
#include "hoi/geometry/mesh.hpp"
#include "hoi/image/image.hpp"

#include <algorithm>
#include <cmath>

namespace hoi {

/// Binary silhouette: a pixel is on when its center falls inside (or on the
/// edge of) any projected triangle. Triangles touching z <= 0 are skipped.
inline BinaryImage render_silhouette(const Points3& vertices, const std::vector<Face>& faces, const Camera& camera) {
    camera.validate();
    BinaryImage out(camera.width, camera.height);
    Points2 uv(vertices.size());
    std::vector<bool> visible(vertices.size());
    for (std::size_t v = 0; v < vertices.size(); ++v) {
        visible[v] = vertices[v].z() > 1e-9;
        if (visible[v]) uv[v] = camera.project(vertices[v]);
    }
    auto edge = [](const Vec2& a, const Vec2& b, const Vec2& p) {
        return (b.x() - a.x()) * (p.y() - a.y()) - (b.y() - a.y()) * (p.x() - a.x());
    };
    for (const auto& f : faces) {
        if (!visible[f[0]] || !visible[f[1]] || !visible[f[2]]) continue;
        const Vec2 &a = uv[f[0]], &b = uv[f[1]], &c = uv[f[2]];
        const double area = edge(a, b, c);
        if (area == 0.0) continue;
        const Vec2 lo = a.cwiseMin(b).cwiseMin(c), hi = a.cwiseMax(b).cwiseMax(c);
        const int x0 = std::max(0, static_cast<int>(std::floor(lo.x() - 0.5)));
        const int y0 = std::max(0, static_cast<int>(std::floor(lo.y() - 0.5)));
        const int x1 = std::min(camera.width - 1, static_cast<int>(std::ceil(hi.x() - 0.5)));
        const int y1 = std::min(camera.height - 1, static_cast<int>(std::ceil(hi.y() - 0.5)));
        for (int y = y0; y <= y1; ++y)
            for (int x = x0; x <= x1; ++x) {
                const Vec2 p(x + 0.5, y + 0.5);
                const double e0 = edge(a, b, p), e1 = edge(b, c, p), e2 = edge(c, a, p);
                const bool inside = area > 0 ? (e0 >= 0 && e1 >= 0 && e2 >= 0) : (e0 <= 0 && e1 <= 0 && e2 <= 0);
                if (inside) out.set(x, y);
            }
    }
    return out;
}

inline BinaryImage render_silhouette(const TriangleMesh& mesh, const Camera& camera) {
    return render_silhouette(mesh.vertices, mesh.faces, camera);
}

}  // namespace hoi
