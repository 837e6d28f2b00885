#pragma once

#include "hoi/geometry/mesh.hpp"
#include "hoi/geometry/sdf.hpp"

#include <Eigen/Core>

namespace hoi {

inline constexpr int kDescriptorResolution = 30;
inline constexpr Eigen::Index kDescriptorSize = 27000;  // 30^3

/// Flattened signed distances of a canonicalized mesh on a 30^3 node grid
/// spanning [-0.5, 0.5]^3, x fastest.
using ShapeDescriptor = Eigen::VectorXd;

inline bool is_canonicalized(const TriangleMesh& mesh, double tol = 1e-6) {
    if (mesh.empty()) return false;
    const BoundingBox b = mesh.bounds();
    return (b.min.array() >= -0.5 - tol).all() && (b.max.array() <= 0.5 + tol).all() &&
           b.extent().maxCoeff() >= 1.0 - tol;
}

inline ShapeDescriptor shape_descriptor(const PartLabeledMesh& mesh) {
    require(is_canonicalized(mesh.mesh), "shape descriptors need a mesh canonicalized to the unit box");
    BoundingBox box;
    box.extend(Vec3::Constant(-0.5));
    box.extend(Vec3::Constant(0.5));
    const SdfGrid grid = compute_sdf_grid_in_box(mesh.mesh, box, kDescriptorResolution);
    return Eigen::Map<const Eigen::VectorXd>(grid.values.data(), static_cast<Eigen::Index>(grid.values.size()));
}

inline double descriptor_distance(const ShapeDescriptor& a, const ShapeDescriptor& b) {
    require(a.size() == b.size(), "descriptor size mismatch");
    return (a - b).norm();
}

}  // namespace hoi
