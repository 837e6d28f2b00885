#pragma once

#include "hoi/geometry/kdtree.hpp"
#include "hoi/geometry/mesh.hpp"

#include <Eigen/LU>

#include <algorithm>
#include <cstdint>
#include <iterator>
#include <queue>
#include <vector>

namespace hoi {

namespace detail {

using Quadric = Eigen::Matrix4d;

inline Quadric plane_quadric(const Vec3& n, const Vec3& p, double weight = 1.0) {
    const Eigen::Vector4d plane(n.x(), n.y(), n.z(), -n.dot(p));
    return weight * plane * plane.transpose();
}

inline double quadric_error(const Quadric& q, const Vec3& p) {
    const Eigen::Vector4d h(p.x(), p.y(), p.z(), 1.0);
    return h.dot(q * h);
}

class QemDecimator {
public:
    explicit QemDecimator(const TriangleMesh& mesh) : verts_(mesh.vertices), faces_(mesh.faces) {
        const std::size_t nv = verts_.size();
        alive_vertex_.assign(nv, false);
        alive_face_.assign(faces_.size(), true);
        version_.assign(nv, 0);
        quadric_.assign(nv, Quadric::Zero());
        vertex_faces_.assign(nv, {});
        for (std::uint32_t f = 0; f < faces_.size(); ++f) {
            for (auto v : faces_[f]) {
                vertex_faces_[v].push_back(f);
                alive_vertex_[v] = true;
            }
            const Vec3 n = face_normal(f);
            const double len = n.norm();
            if (len > 0) {
                const Quadric q = plane_quadric(n / len, verts_[faces_[f][0]], 0.5 * len);
                for (auto v : faces_[f]) quadric_[v] += q;
            }
        }
        add_boundary_constraints();
        for (std::uint32_t v = 0; v < nv; ++v) live_count_ += alive_vertex_[v] ? 1 : 0;
    }

    std::size_t live_vertices() const { return live_count_; }

    void run(std::size_t target, bool allow_flips) {
        heap_ = {};
        for (std::uint32_t v = 0; v < verts_.size(); ++v)
            if (alive_vertex_[v]) push_edges_of(v);
        while (live_count_ > target && !heap_.empty()) {
            const Candidate c = heap_.top();
            heap_.pop();
            if (!alive_vertex_[c.u] || !alive_vertex_[c.v]) continue;
            if (version_[c.u] != c.ver_u || version_[c.v] != c.ver_v) continue;
            if (!can_collapse(c.u, c.v, c.position, allow_flips)) continue;
            collapse(c.u, c.v, c.position);
        }
    }

    TriangleMesh result() const {
        TriangleMesh out;
        out.vertices = verts_;
        for (std::uint32_t f = 0; f < faces_.size(); ++f)
            if (alive_face_[f]) out.faces.push_back(faces_[f]);
        remove_degenerate_faces(out, 0.0);
        return out;
    }

private:
    struct Candidate {
        double cost;
        std::uint32_t u, v;
        std::uint64_t ver_u, ver_v;
        Vec3 position;
        bool operator<(const Candidate& o) const {
            if (cost != o.cost) return cost > o.cost;  // min-heap
            if (u != o.u) return u > o.u;
            return v > o.v;
        }
    };

    Vec3 face_normal(std::uint32_t f) const {
        const auto& t = faces_[f];
        return face_normal_unnormalized(verts_[t[0]], verts_[t[1]], verts_[t[2]]);
    }

    void add_boundary_constraints() {
        // Edges used by a single face get a perpendicular constraint plane so
        // open borders do not shrink.
        std::map<std::pair<std::uint32_t, std::uint32_t>, std::pair<int, std::uint32_t>> edges;
        for (std::uint32_t f = 0; f < faces_.size(); ++f)
            for (int i = 0; i < 3; ++i) {
                auto a = faces_[f][i], b = faces_[f][(i + 1) % 3];
                auto key = std::minmax(a, b);
                auto& e = edges[{key.first, key.second}];
                ++e.first;
                e.second = f;
            }
        for (const auto& [key, info] : edges) {
            if (info.first != 1) continue;
            const Vec3 n = face_normal(info.second);
            const Vec3 dir = verts_[key.second] - verts_[key.first];
            Vec3 perp = dir.cross(n);
            const double len = perp.norm();
            if (len <= 0) continue;
            const Quadric q = plane_quadric(perp / len, verts_[key.first], 1e3 * dir.squaredNorm());
            quadric_[key.first] += q;
            quadric_[key.second] += q;
        }
    }

    std::vector<std::uint32_t> neighbours(std::uint32_t v) const {
        std::vector<std::uint32_t> out;
        for (auto f : vertex_faces_[v]) {
            if (!alive_face_[f]) continue;
            for (auto w : faces_[f])
                if (w != v) out.push_back(w);
        }
        std::sort(out.begin(), out.end());
        out.erase(std::unique(out.begin(), out.end()), out.end());
        return out;
    }

    void push_edge(std::uint32_t a, std::uint32_t b) {
        if (a > b) std::swap(a, b);
        const Quadric q = quadric_[a] + quadric_[b];
        Eigen::Matrix4d m = q;
        m.row(3) << 0, 0, 0, 1;
        Vec3 best = 0.5 * (verts_[a] + verts_[b]);
        double best_cost = quadric_error(q, best);
        Eigen::FullPivLU<Eigen::Matrix4d> lu(m);
        if (lu.isInvertible() && std::abs(lu.determinant()) > 1e-12) {
            const Eigen::Vector4d x = lu.solve(Eigen::Vector4d(0, 0, 0, 1));
            const Vec3 p = x.head<3>();
            // Guard against far-away solutions from near-singular systems.
            const double reach = 2.0 * (verts_[a] - verts_[b]).norm() + 1e-12;
            if (p.allFinite() && (p - best).norm() <= reach) {
                const double c = quadric_error(q, p);
                if (c < best_cost) {
                    best = p;
                    best_cost = c;
                }
            }
        }
        for (const Vec3& p : {verts_[a], verts_[b]}) {
            const double c = quadric_error(q, p);
            if (c < best_cost) {
                best = p;
                best_cost = c;
            }
        }
        heap_.push({std::max(best_cost, 0.0), a, b, version_[a], version_[b], best});
    }

    void push_edges_of(std::uint32_t v) {
        for (auto w : neighbours(v)) push_edge(v, w);
    }

    bool can_collapse(std::uint32_t u, std::uint32_t v, const Vec3& pos, bool allow_flips) const {
        // Link condition: shared neighbours must be exactly the apexes of the
        // faces on edge (u, v).
        const auto nu = neighbours(u), nv = neighbours(v);
        std::vector<std::uint32_t> common;
        std::set_intersection(nu.begin(), nu.end(), nv.begin(), nv.end(), std::back_inserter(common));
        std::size_t shared_faces = 0;
        for (auto f : vertex_faces_[u]) {
            if (!alive_face_[f]) continue;
            const auto& t = faces_[f];
            if (t[0] == v || t[1] == v || t[2] == v) ++shared_faces;
        }
        if (shared_faces == 0 || common.size() != shared_faces) return false;
        // Would leave a lone tetrahedron-like fold.
        if (nu.size() <= 3 && nv.size() <= 3) return false;

        for (auto w : {u, v}) {
            for (auto f : vertex_faces_[w]) {
                if (!alive_face_[f]) continue;
                const auto& t = faces_[f];
                const bool has_u = t[0] == u || t[1] == u || t[2] == u;
                const bool has_v = t[0] == v || t[1] == v || t[2] == v;
                if (has_u && has_v) continue;
                std::array<Vec3, 3> p{verts_[t[0]], verts_[t[1]], verts_[t[2]]};
                const Vec3 before = face_normal_unnormalized(p[0], p[1], p[2]);
                for (int i = 0; i < 3; ++i)
                    if (t[i] == w) p[i] = pos;
                const Vec3 after = face_normal_unnormalized(p[0], p[1], p[2]);
                if (after.squaredNorm() <= 1e-30) return false;
                if (!allow_flips && before.dot(after) <= 0.0) return false;
            }
        }
        return true;
    }

    void collapse(std::uint32_t u, std::uint32_t v, const Vec3& pos) {
        verts_[u] = pos;
        quadric_[u] += quadric_[v];
        for (auto f : vertex_faces_[v]) {
            if (!alive_face_[f]) continue;
            auto& t = faces_[f];
            const bool has_u = t[0] == u || t[1] == u || t[2] == u;
            if (has_u) {
                alive_face_[f] = false;
                continue;
            }
            for (auto& w : t)
                if (w == v) w = u;
            vertex_faces_[u].push_back(f);
        }
        alive_vertex_[v] = false;
        vertex_faces_[v].clear();
        auto& fu = vertex_faces_[u];
        fu.erase(std::remove_if(fu.begin(), fu.end(), [&](std::uint32_t f) { return !alive_face_[f]; }), fu.end());
        --live_count_;
        ++version_[u];
        for (auto w : neighbours(u)) ++version_[w];
        push_edges_of(u);
        for (auto w : neighbours(u)) push_edges_of(w);
    }

    Points3 verts_;
    std::vector<Face> faces_;
    std::vector<bool> alive_vertex_, alive_face_;
    std::vector<std::uint64_t> version_;
    std::vector<Quadric> quadric_;
    std::vector<std::vector<std::uint32_t>> vertex_faces_;
    std::priority_queue<Candidate> heap_;
    std::size_t live_count_ = 0;
};

}  // namespace detail

/// Quadric-error edge-collapse simplification down to at most
/// `target_vertices` referenced vertices (when the topology allows).
inline TriangleMesh decimate(const TriangleMesh& mesh, std::size_t target_vertices) {
    detail::QemDecimator d(mesh);
    d.run(target_vertices, false);
    if (d.live_vertices() > target_vertices) d.run(target_vertices, true);
    return d.result();
}

/// Decimates to `target_vertex_count`, centres the bounding box at the
/// origin and scales each axis independently into [-0.5, 0.5]. Labels follow
/// the nearest original vertex; ties go to the lowest label id.
inline PartLabeledMesh canonicalize_mesh(const PartLabeledMesh& input, std::size_t target_vertex_count = 1000) {
    require(!input.mesh.empty(), "cannot canonicalize an empty mesh");
    require(target_vertex_count >= 4, "target vertex count must be at least 4");
    input.validate();
    for (auto p : input.part_of_vertex) require(p >= 0, "part ids must be non-negative");

    PartLabeledMesh out;
    out.part_names = input.part_names;
    if (input.mesh.vertices.size() <= target_vertex_count) {
        out.mesh = input.mesh;
        out.part_of_vertex = input.part_of_vertex;
        const auto kept = remove_degenerate_faces(out.mesh);
        std::vector<PartId> labels;
        labels.reserve(kept.size());
        for (auto old : kept) labels.push_back(input.part_of_vertex[old]);
        out.part_of_vertex = std::move(labels);
    } else {
        out.mesh = decimate(input.mesh, target_vertex_count);
        std::vector<double> coords;
        std::vector<std::uint64_t> keys;
        for (std::uint32_t i = 0; i < input.mesh.vertices.size(); ++i) {
            const auto& p = input.mesh.vertices[i];
            coords.insert(coords.end(), {p.x(), p.y(), p.z()});
            keys.push_back((static_cast<std::uint64_t>(input.part_of_vertex[i]) << 32) | i);
        }
        const KdTree index(std::move(coords), 3, std::move(keys));
        out.part_of_vertex.reserve(out.mesh.vertices.size());
        for (const auto& p : out.mesh.vertices)
            out.part_of_vertex.push_back(input.part_of_vertex[index.nearest(p).index]);
    }

    const BoundingBox box = out.mesh.bounds();
    const Vec3 center = box.center();
    const Vec3 extent = box.extent();
    const double max_extent = extent.maxCoeff();
    require(max_extent > 0.0, "mesh has zero extent");
    Vec3 scale;
    for (int a = 0; a < 3; ++a) scale[a] = extent[a] > 1e-12 * max_extent ? 1.0 / extent[a] : 1.0 / max_extent;
    for (auto& p : out.mesh.vertices) p = (p - center).cwiseProduct(scale);
    out.mesh.update_normals();
    out.prune_unused_parts();
    return out;
}

}  // namespace hoi
