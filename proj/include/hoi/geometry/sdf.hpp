#pragma once

#include "hoi/geometry/distance.hpp"
#include "hoi/geometry/mesh.hpp"

#include <array>
#include <cmath>
#include <deque>
#include <vector>

namespace hoi {

/// Regular grid of signed distances, negative inside. Node (i, j, k) sits at
/// origin + (i, j, k) * cell.
struct SdfGrid {
    std::array<int, 3> resolution{0, 0, 0};
    Vec3 origin = Vec3::Zero();
    Vec3 cell = Vec3::Ones();
    std::vector<double> values;
    bool sign_reliable = true;  // false when built from a non-watertight mesh

    std::size_t index(int i, int j, int k) const {
        return static_cast<std::size_t>(i) +
               static_cast<std::size_t>(resolution[0]) *
                   (static_cast<std::size_t>(j) + static_cast<std::size_t>(resolution[1]) * k);
    }
    double at(int i, int j, int k) const { return values[index(i, j, k)]; }
    Vec3 node(int i, int j, int k) const { return origin + Vec3(i, j, k).cwiseProduct(cell); }
    Vec3 max_corner() const {
        return origin + Vec3(resolution[0] - 1, resolution[1] - 1, resolution[2] - 1).cwiseProduct(cell);
    }
    std::size_t size() const { return values.size(); }

    /// Upper bound on the gradient norm of the trilinear interpolant.
    double lipschitz_bound() const {
        Vec3 m = Vec3::Zero();
        for (int k = 0; k < resolution[2]; ++k)
            for (int j = 0; j < resolution[1]; ++j)
                for (int i = 0; i < resolution[0]; ++i) {
                    if (i + 1 < resolution[0]) m.x() = std::max(m.x(), std::abs(at(i + 1, j, k) - at(i, j, k)) / cell.x());
                    if (j + 1 < resolution[1]) m.y() = std::max(m.y(), std::abs(at(i, j + 1, k) - at(i, j, k)) / cell.y());
                    if (k + 1 < resolution[2]) m.z() = std::max(m.z(), std::abs(at(i, j, k + 1) - at(i, j, k)) / cell.z());
                }
        return m.norm();
    }

    void validate() const {
        for (int a = 0; a < 3; ++a) require(resolution[a] >= 2, "SDF resolution must be at least 2 per axis");
        require(values.size() == static_cast<std::size_t>(resolution[0]) * resolution[1] * resolution[2],
                "SDF value count does not match resolution");
        for (double v : values) require(std::isfinite(v), "non-finite SDF value");
    }
};

struct SdfSample {
    double value = 0.0;
    Vec3 gradient = Vec3::Zero();
};

/// Trilinear read. Outside the grid the value at the clamped point is
/// extended by the Euclidean distance to the grid box.
inline SdfSample sample_sdf_with_gradient(const SdfGrid& grid, const Vec3& p) {
    const Vec3 lo = grid.origin, hi = grid.max_corner();
    const Vec3 q = p.cwiseMax(lo).cwiseMin(hi);
    const Vec3 outside = p - q;

    Vec3 t;
    std::array<int, 3> base{};
    for (int a = 0; a < 3; ++a) {
        const double u = (q[a] - lo[a]) / grid.cell[a];
        int b = static_cast<int>(std::floor(u));
        b = std::clamp(b, 0, grid.resolution[a] - 2);
        base[a] = b;
        t[a] = std::clamp(u - b, 0.0, 1.0);
    }
    const auto [i, j, k] = base;
    const double c000 = grid.at(i, j, k), c100 = grid.at(i + 1, j, k);
    const double c010 = grid.at(i, j + 1, k), c110 = grid.at(i + 1, j + 1, k);
    const double c001 = grid.at(i, j, k + 1), c101 = grid.at(i + 1, j, k + 1);
    const double c011 = grid.at(i, j + 1, k + 1), c111 = grid.at(i + 1, j + 1, k + 1);
    const double x = t.x(), y = t.y(), z = t.z();

    const double c00 = c000 * (1 - x) + c100 * x, c10 = c010 * (1 - x) + c110 * x;
    const double c01 = c001 * (1 - x) + c101 * x, c11 = c011 * (1 - x) + c111 * x;
    const double c0 = c00 * (1 - y) + c10 * y, c1 = c01 * (1 - y) + c11 * y;

    SdfSample s;
    s.value = c0 * (1 - z) + c1 * z;

    const double dx = ((c100 - c000) * (1 - y) + (c110 - c010) * y) * (1 - z) +
                      ((c101 - c001) * (1 - y) + (c111 - c011) * y) * z;
    const double dy = (c10 - c00) * (1 - z) + (c11 - c01) * z;
    const double dz = c1 - c0;
    Vec3 g(dx / grid.cell.x(), dy / grid.cell.y(), dz / grid.cell.z());
    // Clamped axes do not vary with p.
    for (int a = 0; a < 3; ++a)
        if (outside[a] != 0.0) g[a] = 0.0;

    const double out = outside.norm();
    if (out > 0.0) {
        s.value += out;
        g += outside / out;
    }
    s.gradient = g;
    return s;
}

inline double sample_sdf(const SdfGrid& grid, const Vec3& p) { return sample_sdf_with_gradient(grid, p).value; }

namespace detail {

inline void fill_sdf_values(const TriangleMesh& mesh, SdfGrid& grid) {
    const TriangleBvh bvh(mesh);
    const auto [nx, ny, nz] = grid.resolution;
    grid.values.assign(static_cast<std::size_t>(nx) * ny * nz, 0.0);
    std::vector<double> unsigned_dist(grid.values.size());
    for (int k = 0; k < nz; ++k)
        for (int j = 0; j < ny; ++j)
            for (int i = 0; i < nx; ++i) unsigned_dist[grid.index(i, j, k)] = bvh.closest(grid.node(i, j, k)).distance;

    grid.sign_reliable = mesh.is_watertight();
    std::vector<signed char> sign(grid.values.size(), 0);
    auto direct = [&](int i, int j, int k) {
        return point_in_mesh(mesh, grid.node(i, j, k)) ? static_cast<signed char>(-1) : static_cast<signed char>(1);
    };

    if (!grid.sign_reliable) {
        // Generalized winding number varies continuously off a non-closed
        // surface; evaluate every node directly.
        for (int k = 0; k < nz; ++k)
            for (int j = 0; j < ny; ++j)
                for (int i = 0; i < nx; ++i) sign[grid.index(i, j, k)] = direct(i, j, k);
    } else {
        // For a closed surface the inside indicator is constant on any segment
        // that cannot cross the surface: |d(a)| + |d(b)| > |a - b|. Flood the
        // sign across such edges and seed a direct evaluation elsewhere.
        const std::array<std::array<int, 3>, 6> steps{{{1, 0, 0}, {-1, 0, 0}, {0, 1, 0}, {0, -1, 0}, {0, 0, 1}, {0, 0, -1}}};
        std::deque<std::array<int, 3>> queue;
        for (int k = 0; k < nz; ++k)
            for (int j = 0; j < ny; ++j)
                for (int i = 0; i < nx; ++i) {
                    if (sign[grid.index(i, j, k)] != 0) continue;
                    sign[grid.index(i, j, k)] = direct(i, j, k);
                    queue.push_back({i, j, k});
                    while (!queue.empty()) {
                        const auto [a, b, c] = queue.front();
                        queue.pop_front();
                        const std::size_t from = grid.index(a, b, c);
                        for (int s = 0; s < 6; ++s) {
                            const int ai = a + steps[s][0], bi = b + steps[s][1], ci = c + steps[s][2];
                            if (ai < 0 || bi < 0 || ci < 0 || ai >= nx || bi >= ny || ci >= nz) continue;
                            const std::size_t to = grid.index(ai, bi, ci);
                            if (sign[to] != 0) continue;
                            const double spacing = grid.cell[s / 2];
                            if (unsigned_dist[from] + unsigned_dist[to] > spacing * (1.0 + 1e-9)) {
                                sign[to] = sign[from];
                                queue.push_back({ai, bi, ci});
                            }
                        }
                    }
                }
    }
    for (std::size_t n = 0; n < grid.values.size(); ++n) grid.values[n] = sign[n] * unsigned_dist[n];
}

}  // namespace detail

/// Signed distance grid with `resolution` nodes per axis spanning `box`.
inline SdfGrid compute_sdf_grid_in_box(const TriangleMesh& mesh, const BoundingBox& box, int resolution) {
    require(!mesh.empty(), "cannot compute an SDF of an empty mesh");
    require(resolution >= 2, "SDF resolution must be at least 2");
    require(!box.empty(), "SDF box is empty");
    SdfGrid grid;
    grid.resolution = {resolution, resolution, resolution};
    grid.origin = box.min;
    grid.cell = box.extent() / static_cast<double>(resolution - 1);
    for (int a = 0; a < 3; ++a)
        if (grid.cell[a] <= 0.0) grid.cell[a] = 1e-6;
    detail::fill_sdf_values(mesh, grid);
    return grid;
}

/// Grid over the mesh bounding box, padded on every side by
/// `padding_fraction` of the box diagonal.
inline SdfGrid compute_sdf_grid(const TriangleMesh& mesh, int resolution, double padding_fraction = 0.05) {
    require(!mesh.empty(), "cannot compute an SDF of an empty mesh");
    BoundingBox box = mesh.bounds();
    const double pad = padding_fraction * box.diagonal();
    box.min.array() -= pad;
    box.max.array() += pad;
    return compute_sdf_grid_in_box(mesh, box, resolution);
}

}  // namespace hoi
