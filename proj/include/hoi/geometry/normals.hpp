#pragma once

#include "hoi/geometry/mesh.hpp"

#include <set>

namespace hoi {

/// Area-weighted mean face normal over the faces whose three vertices all
/// carry one of `parts`, renormalized. Falls back to the mean vertex normal
/// when no face qualifies.
inline Vec3 part_mean_normal(const PartLabeledMesh& m, const std::set<PartId>& parts) {
    require(!parts.empty(), "no part given");
    const auto& mesh = m.mesh;
    require(m.part_of_vertex.size() == mesh.vertices.size(), "part labels do not match vertices");

    auto in_part = [&](std::uint32_t v) { return parts.count(m.part_of_vertex[v]) > 0; };

    Vec3 sum = Vec3::Zero();
    double magnitude = 0.0;  // sum of |contributions|, for a relative zero test
    for (std::size_t f = 0; f < mesh.faces.size(); ++f) {
        const auto& t = mesh.faces[f];
        if (in_part(t[0]) && in_part(t[1]) && in_part(t[2])) {
            const Vec3 n = mesh.face_area_normal(f);
            sum += n;
            magnitude += n.norm();
        }
    }
    if (magnitude == 0.0) {
        TriangleMesh copy = mesh;
        copy.update_normals();
        for (std::uint32_t v = 0; v < mesh.vertices.size(); ++v)
            if (in_part(v)) {
                sum += copy.normals[v];
                magnitude += 1.0;
            }
        require(magnitude > 0.0, "part has no vertices");
    }
    const double len = sum.norm();
    if (!(len > 1e-9 * magnitude)) fail(ErrorKind::DegenerateNormal, "part mean normal has zero length");
    return sum / len;
}

inline Vec3 part_mean_normal(const PartLabeledMesh& m, PartId part) {
    return part_mean_normal(m, std::set<PartId>{part});
}

}  // namespace hoi
