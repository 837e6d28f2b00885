#pragma once

#include "hoi/common.hpp"

#include <Eigen/Core>

namespace hoi {

constexpr int kShapeDims = 10;
constexpr int kJointCount = 24;
constexpr int kPoseDims = 3 * kJointCount;
constexpr int kBodyParamDims = kShapeDims + kPoseDims + 3;

using ShapeVector = Eigen::Matrix<double, kShapeDims, 1>;
using PoseVector = Eigen::Matrix<double, kPoseDims, 1>;
using BodyParamVector = Eigen::Matrix<double, kBodyParamDims, 1>;

/// Shape coefficients, per-joint axis-angle pose (joint 0 is the global
/// orientation) and root translation in meters.
struct BodyParams {
    ShapeVector betas = ShapeVector::Zero();
    PoseVector pose = PoseVector::Zero();
    Vec3 translation = Vec3::Zero();

    /// Flat layout: betas, pose, translation.
    BodyParamVector flatten() const {
        BodyParamVector x;
        x << betas, pose, translation;
        return x;
    }

    static BodyParams unflatten(const BodyParamVector& x) {
        BodyParams p;
        p.betas = x.head<kShapeDims>();
        p.pose = x.segment<kPoseDims>(kShapeDims);
        p.translation = x.tail<3>();
        return p;
    }

    Vec3 joint_rotation(int joint) const { return pose.segment<3>(3 * joint); }

    void validate() const {
        require(betas.allFinite() && pose.allFinite() && translation.allFinite(), "body parameters must be finite");
    }
};

/// Detected 2D joints (pixels) with per-joint confidences.
struct Keypoints2D {
    Points2 points;
    std::vector<double> confidence;

    std::size_t size() const { return points.size(); }

    void validate() const {
        require(points.size() == confidence.size(), "keypoint and confidence counts differ");
        for (std::size_t i = 0; i < points.size(); ++i) {
            require(points[i].allFinite(), "non-finite keypoint");
            require(confidence[i] >= 0.0, "keypoint confidence must be non-negative");
        }
    }
};

}  // namespace hoi
