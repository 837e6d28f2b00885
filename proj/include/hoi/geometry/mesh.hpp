#pragma once

#include "hoi/common.hpp"
#include "hoi/geometry/transform.hpp"

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace hoi {

using Face = std::array<std::uint32_t, 3>;

struct BoundingBox {
    Vec3 min = Vec3::Constant(std::numeric_limits<double>::infinity());
    Vec3 max = Vec3::Constant(-std::numeric_limits<double>::infinity());

    void extend(const Vec3& p) {
        min = min.cwiseMin(p);
        max = max.cwiseMax(p);
    }
    bool empty() const { return (max.array() < min.array()).any(); }
    Vec3 center() const { return 0.5 * (min + max); }
    Vec3 extent() const { return max - min; }
    double diagonal() const { return extent().norm(); }
    bool contains(const Vec3& p, double tol = 0.0) const {
        return (p.array() >= min.array() - tol).all() && (p.array() <= max.array() + tol).all();
    }
};

inline BoundingBox bounding_box(const Points3& pts) {
    BoundingBox box;
    for (const auto& p : pts) box.extend(p);
    return box;
}

inline Vec3 face_normal_unnormalized(const Vec3& a, const Vec3& b, const Vec3& c) {
    return (b - a).cross(c - a);
}

/// Triangle soup with shared vertices. Normals are derived data; call
/// `update_normals()` after editing positions.
struct TriangleMesh {
    Points3 vertices;
    std::vector<Face> faces;
    Points3 normals;

    std::size_t vertex_count() const { return vertices.size(); }
    std::size_t face_count() const { return faces.size(); }
    bool empty() const { return vertices.empty() || faces.empty(); }

    Vec3 face_area_normal(std::size_t f) const {
        const auto& t = faces[f];
        return face_normal_unnormalized(vertices[t[0]], vertices[t[1]], vertices[t[2]]);
    }

    double face_area(std::size_t f) const { return 0.5 * face_area_normal(f).norm(); }

    /// Area-weighted vertex normals; isolated or degenerate vertices get +z.
    void update_normals() {
        normals.assign(vertices.size(), Vec3::Zero());
        for (std::size_t f = 0; f < faces.size(); ++f) {
            const Vec3 n = face_area_normal(f);
            for (auto v : faces[f]) normals[v] += n;
        }
        for (auto& n : normals) {
            const double len = n.norm();
            n = len > 0.0 ? Vec3(n / len) : Vec3::UnitZ();
        }
    }

    BoundingBox bounds() const { return bounding_box(vertices); }

    void validate() const {
        for (const auto& f : faces)
            for (auto v : f)
                require(v < vertices.size(), "face index out of range");
        for (const auto& p : vertices) require(p.allFinite(), "non-finite vertex");
    }

    /// Edge-manifold closed surface: every directed edge has exactly one
    /// opposite partner. A union of closed components passes.
    bool is_watertight() const {
        std::map<std::pair<std::uint32_t, std::uint32_t>, int> directed;
        for (const auto& f : faces)
            for (int i = 0; i < 3; ++i) ++directed[{f[i], f[(i + 1) % 3]}];
        for (const auto& [edge, count] : directed) {
            if (count != 1) return false;
            auto it = directed.find({edge.second, edge.first});
            if (it == directed.end() || it->second != 1) return false;
        }
        return !faces.empty();
    }

    void transform(const RigidSimTransform& t) {
        vertices = t.apply(vertices);
        update_normals();
    }
};

/// Drops zero-area faces and vertices no face references, keeping vertex
/// order. Returns the old index of every kept vertex.
inline std::vector<std::uint32_t> remove_degenerate_faces(TriangleMesh& mesh, double area_eps = 1e-14) {
    std::vector<Face> kept;
    kept.reserve(mesh.faces.size());
    for (std::size_t f = 0; f < mesh.faces.size(); ++f) {
        const auto& t = mesh.faces[f];
        if (t[0] == t[1] || t[1] == t[2] || t[0] == t[2]) continue;
        if (mesh.face_area(f) <= area_eps) continue;
        kept.push_back(t);
    }
    std::vector<bool> used(mesh.vertices.size(), false);
    for (const auto& t : kept)
        for (auto v : t) used[v] = true;
    std::vector<std::uint32_t> remap(mesh.vertices.size(), 0);
    std::vector<std::uint32_t> old_index;
    Points3 verts;
    for (std::uint32_t v = 0; v < mesh.vertices.size(); ++v) {
        if (!used[v]) continue;
        remap[v] = static_cast<std::uint32_t>(verts.size());
        verts.push_back(mesh.vertices[v]);
        old_index.push_back(v);
    }
    for (auto& t : kept)
        for (auto& v : t) v = remap[v];
    mesh.vertices = std::move(verts);
    mesh.faces = std::move(kept);
    mesh.update_normals();
    return old_index;
}

using PartId = int;

/// Mesh whose vertices each carry one semantic part label.
struct PartLabeledMesh {
    TriangleMesh mesh;
    std::vector<PartId> part_of_vertex;
    std::map<PartId, std::string> part_names;

    std::optional<PartId> find_part(const std::string& name) const {
        for (const auto& [id, n] : part_names)
            if (n == name) return id;
        return std::nullopt;
    }

    std::vector<std::uint32_t> vertices_of(const std::set<PartId>& parts) const {
        std::vector<std::uint32_t> out;
        for (std::uint32_t v = 0; v < part_of_vertex.size(); ++v)
            if (parts.count(part_of_vertex[v])) out.push_back(v);
        return out;
    }

    std::vector<std::uint32_t> vertices_of(PartId part) const { return vertices_of(std::set<PartId>{part}); }

    /// Drops names that label no vertex.
    void prune_unused_parts() {
        std::set<PartId> used(part_of_vertex.begin(), part_of_vertex.end());
        for (auto it = part_names.begin(); it != part_names.end();)
            it = used.count(it->first) ? std::next(it) : part_names.erase(it);
    }

    void validate() const {
        mesh.validate();
        require(part_of_vertex.size() == mesh.vertices.size(), "every vertex needs exactly one part label");
        std::set<PartId> used;
        for (auto p : part_of_vertex) {
            require(part_names.count(p) > 0, "part label " + std::to_string(p) + " has no name");
            used.insert(p);
        }
        for (const auto& [id, name] : part_names)
            require(used.count(id) > 0, "part '" + name + "' has no vertices");
    }
};

/// Appends `b` to `a`, offsetting indices. Part ids of `b` are remapped by name.
inline void append_mesh(PartLabeledMesh& a, const PartLabeledMesh& b) {
    const auto offset = static_cast<std::uint32_t>(a.mesh.vertices.size());
    std::map<PartId, PartId> id_map;
    for (const auto& [id, name] : b.part_names) {
        if (auto existing = a.find_part(name)) {
            id_map[id] = *existing;
        } else {
            const PartId fresh = a.part_names.empty() ? 0 : a.part_names.rbegin()->first + 1;
            a.part_names[fresh] = name;
            id_map[id] = fresh;
        }
    }
    a.mesh.vertices.insert(a.mesh.vertices.end(), b.mesh.vertices.begin(), b.mesh.vertices.end());
    for (auto f : b.mesh.faces) {
        for (auto& v : f) v += offset;
        a.mesh.faces.push_back(f);
    }
    for (auto p : b.part_of_vertex) a.part_of_vertex.push_back(id_map.at(p));
    a.mesh.update_normals();
}

}  // namespace hoi
