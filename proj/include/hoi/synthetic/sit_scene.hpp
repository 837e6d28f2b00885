#pragma once

#include "hoi/body/test_body.hpp"
#include "hoi/geometry/decimate.hpp"
#include "hoi/image/raster.hpp"
#include "hoi/scene/state.hpp"
#include "hoi/synthetic/chair.hpp"

#include <numbers>

namespace hoi {

/// Chair whose bounding box is a 0.7 m cube, so canonicalization scales it
/// uniformly and the ground-truth object scale is exactly 0.7.
inline ChairStyle cube_chair_style() {
    ChairStyle s;
    s.seat_height = 0.40;
    s.seat_width = 0.70;
    s.seat_depth = 0.70;
    s.back_height = 0.30;
    s.seat_thickness = 0.06;
    s.back_thickness = 0.06;
    s.leg_thickness = 0.05;
    return s;
}

struct SitSceneOptions {
    Camera camera{400, 400, 240, 180, 480, 360};
    double yaw = 0.5;    // body turned about the vertical axis
    double pitch = 0.25;  // camera looking down on the scene
    Vec3 body_translation{0.0, 0.1, 3.0};
    ChairStyle chair = cube_chair_style();
};

struct SyntheticScene {
    SceneState state;        // ground truth, mask rendered from it
    BodyParams body;
    Points3 object_vertices;  // ground-truth object in the camera frame
};

/// Hips and knees bent to right angles.
inline BodyParams sitting_pose(double yaw, double pitch, const Vec3& translation) {
    BodyParams p;
    const double half_pi = std::numbers::pi / 2;
    for (int hip : {1, 2}) p.pose.segment<3>(3 * hip) = Vec3(-half_pi, 0, 0);
    for (int knee : {4, 5}) p.pose.segment<3>(3 * knee) = Vec3(half_pi, 0, 0);
    const Mat3 g = rotation_from_axis_angle(Vec3(pitch, 0, 0)) * rotation_from_axis_angle(Vec3(0, yaw, 0)) *
                   rotation_from_axis_angle(Vec3(std::numbers::pi, 0, 0));
    p.pose.head<3>() = axis_angle_from_rotation(g);
    p.translation = translation;
    return p;
}

/// A test body sitting on a chair exemplar: the seat top meets the lowest
/// "butt" vertex and the front of the chair back meets the rearmost "back"
/// vertex. Interaction pairs are (chair seat, butt) and (chair back, back).
inline SyntheticScene make_sit_scene(const SitSceneOptions& options = {}) {
    const ArticulatedTestBody model;
    const auto regions = model.regions();
    SyntheticScene out;
    out.body = sitting_pose(options.yaw, options.pitch, options.body_translation);

    // Placement in the body frame (pelvis at the origin, y up, z forward).
    BodyParams local = out.body;
    local.pose.head<3>().setZero();
    local.translation.setZero();
    const BodyMesh rest = model.evaluate(local);
    auto extreme = [](const PartLabeledMesh& m, const std::vector<std::uint32_t>& vs, int axis, bool max) {
        double e = max ? -std::numeric_limits<double>::infinity() : std::numeric_limits<double>::infinity();
        for (auto v : vs) e = max ? std::max(e, m.mesh.vertices[v][axis]) : std::min(e, m.mesh.vertices[v][axis]);
        return e;
    };
    const double butt_bottom =
        extreme(rest.mesh, rest.mesh.vertices_of(resolve_body_region(rest.mesh, regions, "butt")), 1, false);
    const double back_rear =
        extreme(rest.mesh, rest.mesh.vertices_of(resolve_body_region(rest.mesh, regions, "back")), 2, false);

    const PartLabeledMesh metric = make_chair(options.chair);
    const PartLabeledMesh exemplar = canonicalize_mesh(metric, 1000);
    const double scale = metric.mesh.bounds().extent().maxCoeff();
    const double seat_top = extreme(exemplar, exemplar.vertices_of(*exemplar.find_part("chair seat")), 1, true);
    const double back_front = extreme(exemplar, exemplar.vertices_of(*exemplar.find_part("chair back")), 2, true);
    const Vec3 offset(0.0, butt_bottom - scale * seat_top, back_rear - scale * back_front);

    const BodyMesh body = model.evaluate(out.body);
    const Mat3 g = rotation_from_axis_angle(out.body.joint_rotation(0));
    ObjectInstance chair;
    chair.category = "chair";
    chair.mesh = exemplar;
    chair.transform.scale = scale;
    chair.transform.rotation = out.body.joint_rotation(0);
    chair.transform.translation = body.joints[0] + g * offset;
    chair.interaction = {"sit", "chair", {{"chair seat", "butt"}, {"chair back", "back"}}};
    out.object_vertices = chair.world_vertices();
    chair.evidence = MaskEvidence::from(render_silhouette(out.object_vertices, exemplar.mesh.faces, options.camera));

    out.state.camera = options.camera;
    out.state.humans.push_back(make_human(body, model));
    out.state.objects.push_back(std::move(chair));
    return out;
}

/// Rotates by `rotation` and scales by `scale_factor` about the object's
/// vertex centroid, then translates by `translation`.
inline void perturb_object(ObjectInstance& obj, const Vec3& translation, const Vec3& rotation, double scale_factor) {
    require(scale_factor > 0.0, "scale factor must be positive");
    Vec3 c = Vec3::Zero();
    const Points3 w = obj.world_vertices();
    for (const auto& p : w) c += p;
    c /= static_cast<double>(w.size());
    auto& t = obj.transform;
    const Mat3 r = rotation_from_axis_angle(rotation);
    t.rotation = axis_angle_from_rotation(r * t.rotation_matrix());
    t.translation = c + scale_factor * (r * (t.translation - c)) + translation;
    t.scale *= scale_factor;
}

}  // namespace hoi
