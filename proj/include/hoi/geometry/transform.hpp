#pragma once

#include "hoi/common.hpp"

#include <algorithm>
#include <cmath>

namespace hoi {

inline Mat3 skew(const Vec3& v) {
    Mat3 m;
    m << 0, -v.z(), v.y(),
         v.z(), 0, -v.x(),
         -v.y(), v.x(), 0;
    return m;
}

/// Rodrigues map from an axis-angle vector to a rotation matrix.
inline Mat3 rotation_from_axis_angle(const Vec3& aa) {
    const double angle = aa.norm();
    if (angle < 1e-12) return Mat3::Identity() + skew(aa);
    return Eigen::AngleAxisd(angle, aa / angle).toRotationMatrix();
}

inline Vec3 axis_angle_from_rotation(const Mat3& r) {
    const Eigen::AngleAxisd aa(r);
    return aa.axis() * aa.angle();
}

/// Geodesic angle between two rotations, radians.
inline double rotation_angle_between(const Mat3& a, const Mat3& b) {
    const double c = std::clamp(((a.transpose() * b).trace() - 1.0) / 2.0, -1.0, 1.0);
    return std::acos(c);
}

/// Isotropic scale, rotation, translation: p -> scale * R * p + t.
struct RigidSimTransform {
    double scale = 1.0;
    Vec3 rotation = Vec3::Zero();  // axis-angle, radians
    Vec3 translation = Vec3::Zero();

    Mat3 rotation_matrix() const { return rotation_from_axis_angle(rotation); }

    Vec3 apply(const Vec3& p) const { return scale * (rotation_matrix() * p) + translation; }

    Points3 apply(const Points3& pts) const {
        const Mat3 r = rotation_matrix();
        Points3 out;
        out.reserve(pts.size());
        for (const auto& p : pts) out.push_back(scale * (r * p) + translation);
        return out;
    }

    RigidSimTransform inverse() const {
        const Mat3 rt = rotation_matrix().transpose();
        RigidSimTransform inv;
        inv.scale = 1.0 / scale;
        inv.rotation = axis_angle_from_rotation(rt);
        inv.translation = -(rt * translation) / scale;
        return inv;
    }

    /// (this ∘ other)(p) = this(other(p)).
    RigidSimTransform compose(const RigidSimTransform& other) const {
        const Mat3 r = rotation_matrix();
        RigidSimTransform out;
        out.scale = scale * other.scale;
        out.rotation = axis_angle_from_rotation(r * other.rotation_matrix());
        out.translation = scale * (r * other.translation) + translation;
        return out;
    }

    void validate() const {
        require(std::isfinite(scale) && scale > 0.0, "transform scale must be positive");
        require(rotation.allFinite(), "transform rotation must be finite");
        require(translation.allFinite(), "transform translation must be finite");
    }
};

}  // namespace hoi
