#pragma once

#include "hoi/geometry/mesh.hpp"
#include "hoi/geometry/primitives.hpp"

#include <cmath>
#include <random>

namespace hoi::test {

inline Vec3 random_unit(std::mt19937_64& rng) {
    std::normal_distribution<double> n(0.0, 1.0);
    Vec3 v(n(rng), n(rng), n(rng));
    return v.normalized();
}

inline Vec3 random_in_box(std::mt19937_64& rng, const Vec3& lo, const Vec3& hi) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    return lo + Vec3(u(rng), u(rng), u(rng)).cwiseProduct(hi - lo);
}

/// Star-shaped blob: a UV sphere whose radius varies with a few random
/// low-frequency harmonics. Closed and non-convex.
inline TriangleMesh make_random_blob(std::mt19937_64& rng, int rings = 20, int segments = 40) {
    TriangleMesh m = make_uv_sphere(Vec3::Zero(), 1.0, rings, segments);
    std::uniform_real_distribution<double> amp(-0.25, 0.25), phase(0.0, 6.28);
    const double a1 = amp(rng), a2 = amp(rng), a3 = amp(rng);
    const double p1 = phase(rng), p2 = phase(rng), p3 = phase(rng);
    for (auto& p : m.vertices) {
        const Vec3 d = p.normalized();
        const double r = 1.0 + a1 * std::sin(3 * d.x() + p1) + a2 * std::sin(4 * d.y() + p2) * std::cos(2 * d.z()) +
                         a3 * std::cos(5 * d.z() + p3);
        p = d * r;
    }
    m.update_normals();
    return m;
}

/// Flat square grid patch in the plane through the origin spanned by
/// (u, v); normal u x v.
inline TriangleMesh make_patch(const Vec3& u, const Vec3& v, int n = 8) {
    TriangleMesh m;
    for (int j = 0; j <= n; ++j)
        for (int i = 0; i <= n; ++i) m.vertices.push_back((i / double(n) - 0.5) * u + (j / double(n) - 0.5) * v);
    auto id = [&](int i, int j) { return static_cast<std::uint32_t>(j * (n + 1) + i); };
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i) {
            m.faces.push_back({id(i, j), id(i + 1, j), id(i + 1, j + 1)});
            m.faces.push_back({id(i, j), id(i + 1, j + 1), id(i, j + 1)});
        }
    m.update_normals();
    return m;
}

inline PartLabeledMesh label_all(const TriangleMesh& m, const std::string& name) {
    PartLabeledMesh p;
    p.mesh = m;
    p.part_of_vertex.assign(m.vertices.size(), 0);
    p.part_names[0] = name;
    return p;
}

/// Seat box plus back box, densely subdivided (about 10k vertices).
inline PartLabeledMesh make_dense_two_part_chair(int subdivisions = 29) {
    PartLabeledMesh chair = label_all(make_box(Vec3(0, 0.45, 0), Vec3(0.25, 0.03, 0.25), subdivisions), "chair seat");
    append_mesh(chair, label_all(make_box(Vec3(0, 0.75, -0.22), Vec3(0.25, 0.27, 0.03), subdivisions), "chair back"));
    return chair;
}

}  // namespace hoi::test
