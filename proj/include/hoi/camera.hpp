#pragma once

#include "hoi/common.hpp"

#include <Eigen/Core>

namespace hoi {

using Mat23 = Eigen::Matrix<double, 2, 3>;

/// Pinhole intrinsics. Pixel (i, j) covers [i, i+1) x [j, j+1), so its center
/// sits at (i + 0.5, j + 0.5). Camera looks down +z with y pointing down.
struct Camera {
    double fx = 1.0, fy = 1.0;
    double cx = 0.0, cy = 0.0;
    int width = 0, height = 0;

    void validate() const {
        require(fx > 0.0 && fy > 0.0, "focal lengths must be positive");
        require(width >= 0 && height >= 0, "image size must be non-negative");
    }

    Eigen::Matrix3d intrinsic_matrix() const {
        Eigen::Matrix3d k;
        k << fx, 0, cx, 0, fy, cy, 0, 0, 1;
        return k;
    }

    Vec2 project(const Vec3& p) const {
        if (!(p.z() > 0.0)) fail(ErrorKind::BehindCamera, "point with z <= 0 cannot be projected");
        return {fx * p.x() / p.z() + cx, fy * p.y() / p.z() + cy};
    }

    /// d project / d p.
    Mat23 project_jacobian(const Vec3& p) const {
        if (!(p.z() > 0.0)) fail(ErrorKind::BehindCamera, "point with z <= 0 cannot be projected");
        const double iz = 1.0 / p.z();
        Mat23 j;
        j << fx * iz, 0, -fx * p.x() * iz * iz, 0, fy * iz, -fy * p.y() * iz * iz;
        return j;
    }

    /// Point at depth `z` on the ray through pixel `uv`.
    Vec3 back_project(const Vec2& uv, double z) const {
        return {(uv.x() - cx) / fx * z, (uv.y() - cy) / fy * z, z};
    }
};

inline Points2 project_perspective(const Points3& points, const Camera& camera) {
    camera.validate();
    Points2 out;
    out.reserve(points.size());
    for (const auto& p : points) out.push_back(camera.project(p));
    return out;
}

}  // namespace hoi
