#pragma once

#include "hoi/optim/adam.hpp"
#include "hoi/parallel.hpp"
#include "hoi/scene/losses.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>
#include <vector>

namespace hoi {

struct InitPoseConfig {
    int iterations = 50;
    double learning_rate = 1e-3;
    int yaw_hypotheses = 12;  // evenly spaced about the camera's vertical axis
    std::size_t min_mask_pixels = 50;
    unsigned jobs = 0;  // 0 = hardware concurrency
};

struct InitPoseResult {
    RigidSimTransform transform;
    double silhouette_loss = 0.0;
    double iou = 0.0;
    std::vector<std::string> warnings;
};

namespace detail {

struct PixelBox {
    Vec2 min, max;
    double extent() const { return std::max(max.x() - min.x(), max.y() - min.y()); }
};

inline PixelBox mask_box(const BinaryImage& m) {
    PixelBox b{Vec2::Constant(std::numeric_limits<double>::infinity()), Vec2::Constant(-std::numeric_limits<double>::infinity())};
    for (int y = 0; y < m.height; ++y)
        for (int x = 0; x < m.width; ++x)
            if (m.at(x, y)) {
                b.min = b.min.cwiseMin(Vec2(x, y));
                b.max = b.max.cwiseMax(Vec2(x + 1, y + 1));
            }
    return b;
}

inline PixelBox projected_box(const Points3& world, const Camera& camera) {
    PixelBox b{Vec2::Constant(std::numeric_limits<double>::infinity()), Vec2::Constant(-std::numeric_limits<double>::infinity())};
    for (const auto& p : world) {
        const Vec2 uv = camera.project(p);
        b.min = b.min.cwiseMin(uv);
        b.max = b.max.cwiseMax(uv);
    }
    return b;
}

// Depth along the centroid ray at which the rotated, scaled exemplar has the
// mask's pixel extent. Projected size goes as 1/depth, so a few fixed-point
// passes settle it.
inline Vec3 similar_triangles_translation(const Points3& rotated_scaled, const Camera& camera, const Vec2& centroid,
                                          double mask_extent) {
    const Vec3 ray = camera.back_project(centroid, 1.0);
    double z_min = std::numeric_limits<double>::infinity();
    for (const auto& p : rotated_scaled) z_min = std::min(z_min, p.z());
    const double nearest_depth = 1e-3 - z_min;
    double depth = std::max(1.0, nearest_depth);
    for (int pass = 0; pass < 20; ++pass) {
        Points3 w = rotated_scaled;
        for (auto& p : w) p += depth * ray;
        const double e = projected_box(w, camera).extent();
        if (!(e > 0.0)) fail(ErrorKind::DegenerateConfiguration, "exemplar projects to a point");
        depth = std::max(depth * e / mask_extent, nearest_depth);
    }
    return depth * ray;
}

}  // namespace detail

/// Upright orientation in the camera frame (y down) facing the camera, turned
/// by `yaw` about the vertical axis.
inline Mat3 upright_rotation(double yaw) {
    return rotation_from_axis_angle(Vec3(0.0, yaw, 0.0)) * rotation_from_axis_angle(Vec3(std::numbers::pi, 0.0, 0.0));
}

/// Scale fixed to the prior; translation from the mask centroid and extent;
/// rotation and translation refined on the silhouette loss from several yaw
/// starts, keeping the best.
inline InitPoseResult init_object_pose(const PartLabeledMesh& exemplar, const BinaryImage& mask, const Camera& camera,
                                       double intrinsic_scale, const InitPoseConfig& config = {}) {
    if (mask.count() == 0) fail(ErrorKind::InvalidInput, "object mask is empty");
    require(intrinsic_scale > 0.0, "intrinsic scale must be positive");
    require(config.yaw_hypotheses >= 1, "need at least one yaw hypothesis");
    camera.validate();
    InitPoseResult best;
    if (mask.count() < config.min_mask_pixels)
        best.warnings.push_back("unreliable-init: mask has " + std::to_string(mask.count()) + " pixels");

    SceneState base;
    base.camera = camera;
    base.objects.resize(1);
    base.objects[0].mesh = exemplar;
    base.objects[0].evidence = MaskEvidence::from(mask);
    const Vec2 centroid = mask.centroid();
    const double extent = detail::mask_box(mask).extent();

    struct Candidate {
        RigidSimTransform t;
        double loss = std::numeric_limits<double>::infinity();
    };
    std::vector<Candidate> candidates(static_cast<std::size_t>(config.yaw_hypotheses));
    parallel_for(candidates.size(), [&](std::size_t h) {
        SceneState state = base;
        auto& obj = state.objects[0];
        const Mat3 r = upright_rotation(2.0 * std::numbers::pi * static_cast<double>(h) / config.yaw_hypotheses);
        Points3 rs = exemplar.mesh.vertices;
        for (auto& p : rs) p = intrinsic_scale * (r * p);
        obj.transform.scale = intrinsic_scale;
        obj.transform.rotation = axis_angle_from_rotation(r);
        obj.transform.translation = detail::similar_triangles_translation(rs, camera, centroid, extent);

        Adam adam(6, {config.learning_rate});
        Candidate c{obj.transform};
        for (int it = 0;; ++it) {
            SceneGradient g = SceneGradient::zeros(state);
            const double loss = loss_reprojection(state, freeze_context(state), {}, &g);
            if (!std::isfinite(loss)) break;
            if (loss < c.loss) c = {obj.transform, loss};
            if (it == config.iterations) break;
            Eigen::VectorXd grad(6);
            grad << g.objects[0].rotation, g.objects[0].translation;
            const Eigen::VectorXd step = adam.step(grad);
            SceneGradient d = SceneGradient::zeros(state);
            d.objects[0].rotation = step.head<3>();
            d.objects[0].translation = step.tail<3>();
            apply_increment(state, d);
        }
        candidates[h] = c;
    }, config.jobs);

    std::size_t pick = 0;
    for (std::size_t h = 1; h < candidates.size(); ++h)
        if (candidates[h].loss < candidates[pick].loss) pick = h;
    if (!std::isfinite(candidates[pick].loss))
        fail(ErrorKind::OptimizationFailure, "pose initialization produced no finite silhouette loss");
    best.transform = candidates[pick].t;
    best.silhouette_loss = candidates[pick].loss;
    best.iou = silhouette_iou(render_silhouette(best.transform.apply(exemplar.mesh.vertices), exemplar.mesh.faces, camera), mask);
    return best;
}

}  // namespace hoi
