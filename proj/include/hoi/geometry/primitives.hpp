#pragma once

#include "hoi/geometry/mesh.hpp"

#include <cmath>
#include <map>
#include <numbers>

namespace hoi {

/// Closed axis-aligned box with every side split into `subdivisions`²
/// quads. Outward-facing, watertight.
inline TriangleMesh make_box(const Vec3& center, const Vec3& half_extent, int subdivisions = 1) {
    require(subdivisions >= 1, "box subdivisions must be positive");
    const int n = subdivisions;
    TriangleMesh m;
    std::map<std::array<int, 3>, std::uint32_t> index;
    auto vertex = [&](int i, int j, int k) {
        const std::array<int, 3> key{i, j, k};
        auto it = index.find(key);
        if (it != index.end()) return it->second;
        const Vec3 unit(2.0 * i / n - 1.0, 2.0 * j / n - 1.0, 2.0 * k / n - 1.0);
        const auto id = static_cast<std::uint32_t>(m.vertices.size());
        m.vertices.push_back(center + unit.cwiseProduct(half_extent));
        index.emplace(key, id);
        return id;
    };
    // For each axis and side, walk the (u, v) lattice of that face.
    for (int axis = 0; axis < 3; ++axis) {
        const int ua = (axis + 1) % 3, va = (axis + 2) % 3;
        for (int side = 0; side < 2; ++side) {
            for (int u = 0; u < n; ++u)
                for (int v = 0; v < n; ++v) {
                    auto at = [&](int du, int dv) {
                        std::array<int, 3> c{};
                        c[axis] = side * n;
                        c[ua] = u + du;
                        c[va] = v + dv;
                        return vertex(c[0], c[1], c[2]);
                    };
                    const auto a = at(0, 0), b = at(1, 0), c = at(1, 1), d = at(0, 1);
                    // (ua x va) = +axis, so counter-clockwise a-b-c faces +axis.
                    if (side == 1) {
                        m.faces.push_back({a, b, c});
                        m.faces.push_back({a, c, d});
                    } else {
                        m.faces.push_back({a, c, b});
                        m.faces.push_back({a, d, c});
                    }
                }
        }
    }
    m.update_normals();
    return m;
}

/// Latitude/longitude sphere.
inline TriangleMesh make_uv_sphere(const Vec3& center, double radius, int rings = 16, int segments = 32) {
    TriangleMesh m;
    m.vertices.push_back(center + Vec3(0, -radius, 0));
    for (int r = 1; r < rings; ++r) {
        const double lat = -std::numbers::pi / 2 + std::numbers::pi * r / rings;
        for (int s = 0; s < segments; ++s) {
            const double lon = 2 * std::numbers::pi * s / segments;
            m.vertices.push_back(center + radius * Vec3(std::cos(lat) * std::cos(lon), std::sin(lat),
                                                        -std::cos(lat) * std::sin(lon)));
        }
    }
    m.vertices.push_back(center + Vec3(0, radius, 0));
    const auto top = static_cast<std::uint32_t>(m.vertices.size() - 1);
    auto ring_vertex = [&](int r, int s) { return static_cast<std::uint32_t>(1 + (r - 1) * segments + (s % segments)); };
    for (int s = 0; s < segments; ++s) m.faces.push_back({0, ring_vertex(1, s), ring_vertex(1, s + 1)});
    for (int r = 1; r + 1 < rings; ++r)
        for (int s = 0; s < segments; ++s) {
            const auto a = ring_vertex(r, s), b = ring_vertex(r, s + 1), c = ring_vertex(r + 1, s + 1),
                       d = ring_vertex(r + 1, s);
            m.faces.push_back({a, d, c});
            m.faces.push_back({a, c, b});
        }
    for (int s = 0; s < segments; ++s) m.faces.push_back({ring_vertex(rings - 1, s), top, ring_vertex(rings - 1, s + 1)});
    // Orientation check: make normals point outward.
    const Vec3 n0 = m.face_area_normal(0);
    const Vec3 c0 = (m.vertices[m.faces[0][0]] + m.vertices[m.faces[0][1]] + m.vertices[m.faces[0][2]]) / 3.0;
    if (n0.dot(c0 - center) < 0)
        for (auto& f : m.faces) std::swap(f[1], f[2]);
    m.update_normals();
    return m;
}

/// Closed capsule from `a` to `b`. `rings` is per hemisphere.
inline TriangleMesh make_capsule(const Vec3& a, const Vec3& b, double radius, int rings = 4, int segments = 12) {
    const Vec3 axis = b - a;
    const double length = axis.norm();
    TriangleMesh m = make_uv_sphere(Vec3::Zero(), radius, 2 * rings, segments);
    // Upper hemisphere (y >= 0 ring included) moves up by `length`; the
    // equator ring is duplicated so the cylinder wall has its own band.
    const int seg = segments;
    const int equator_ring = rings;  // ring index with lat == 0
    Points3 verts;
    std::vector<std::uint32_t> remap_low(m.vertices.size()), remap_high(m.vertices.size());
    for (std::uint32_t v = 0; v < m.vertices.size(); ++v) {
        const Vec3 p = m.vertices[v];
        const bool on_equator = v >= static_cast<std::uint32_t>(1 + (equator_ring - 1) * seg) &&
                                v < static_cast<std::uint32_t>(1 + equator_ring * seg);
        if (on_equator) {
            remap_low[v] = static_cast<std::uint32_t>(verts.size());
            verts.push_back(p);
            remap_high[v] = static_cast<std::uint32_t>(verts.size());
            verts.push_back(p + Vec3(0, length, 0));
        } else if (p.y() > 0) {
            remap_low[v] = remap_high[v] = static_cast<std::uint32_t>(verts.size());
            verts.push_back(p + Vec3(0, length, 0));
        } else {
            remap_low[v] = remap_high[v] = static_cast<std::uint32_t>(verts.size());
            verts.push_back(p);
        }
    }
    std::vector<Face> faces;
    for (const auto& f : m.faces) {
        // A face touching the equator belongs to the hemisphere of its other vertices.
        bool upper = false;
        for (auto v : f)
            if (m.vertices[v].y() > 1e-12) upper = true;
        Face g;
        for (int i = 0; i < 3; ++i) g[i] = upper ? remap_high[f[i]] : remap_low[f[i]];
        faces.push_back(g);
    }
    // Cylinder wall between the duplicated equator rings.
    for (int s = 0; s < seg; ++s) {
        const auto v0 = static_cast<std::uint32_t>(1 + (equator_ring - 1) * seg + s);
        const auto v1 = static_cast<std::uint32_t>(1 + (equator_ring - 1) * seg + (s + 1) % seg);
        const auto a0 = remap_low[v0], a1 = remap_low[v1], b0 = remap_high[v0], b1 = remap_high[v1];
        faces.push_back({a0, a1, b1});
        faces.push_back({a0, b1, b0});
    }
    TriangleMesh out;
    out.vertices = std::move(verts);
    out.faces = std::move(faces);
    // Fix wall orientation against the local radial direction.
    const std::size_t wall_begin = out.faces.size() - 2 * seg;
    for (std::size_t f = wall_begin; f < out.faces.size(); ++f) {
        const auto& t = out.faces[f];
        Vec3 c = (out.vertices[t[0]] + out.vertices[t[1]] + out.vertices[t[2]]) / 3.0;
        c.y() = 0;
        if (out.face_area_normal(f).dot(c) < 0) std::swap(out.faces[f][1], out.faces[f][2]);
    }
    // Align local +y with the segment direction and move to `a`.
    Mat3 r = Mat3::Identity();
    if (length > 1e-12) r = Eigen::Quaterniond::FromTwoVectors(Vec3::UnitY(), axis / length).toRotationMatrix();
    for (auto& p : out.vertices) p = a + r * p;
    out.update_normals();
    return out;
}

}  // namespace hoi
