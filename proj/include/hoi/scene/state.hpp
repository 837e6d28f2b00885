#pragma once

#include "hoi/body/model.hpp"
#include "hoi/camera.hpp"
#include "hoi/geometry/kdtree.hpp"
#include "hoi/geometry/mesh.hpp"
#include "hoi/geometry/sdf.hpp"
#include "hoi/geometry/transform.hpp"
#include "hoi/image/distance_transform.hpp"
#include "hoi/image/image.hpp"
#include "hoi/priors/priors.hpp"

#include <map>
#include <set>
#include <string>
#include <vector>

namespace hoi {

inline constexpr int kBodySdfResolution = 8;
inline constexpr double kBodySdfPadding = 0.10;  // of the box extent, per side

/// A posed body in the camera frame plus its scale about the root joint.
struct HumanInstance {
    PartLabeledMesh mesh;  // at scale 1
    Vec3 root = Vec3::Zero();
    double scale = 1.0;
    std::map<std::string, std::set<std::string>> regions;
    SdfGrid sdf;  // of `mesh`, built once; scaled analytically

    Vec3 world(const Vec3& v) const { return root + scale * (v - root); }
    Points3 world_vertices() const {
        Points3 out;
        out.reserve(mesh.mesh.vertices.size());
        for (const auto& v : mesh.mesh.vertices) out.push_back(world(v));
        return out;
    }

    /// Signed distance to the scaled body: s * f(r + (p - r) / s).
    SdfSample signed_distance(const Vec3& p) const {
        const SdfSample base = sample_sdf_with_gradient(sdf, root + (p - root) / scale);
        return {scale * base.value, base.gradient};
    }
};

inline SdfGrid build_body_sdf(const TriangleMesh& mesh) {
    BoundingBox box = mesh.bounds();
    const Vec3 pad = kBodySdfPadding * box.extent();
    box.min -= pad;
    box.max += pad;
    return compute_sdf_grid_in_box(mesh, box, kBodySdfResolution);
}

inline HumanInstance make_human(const BodyMesh& body, const BodyModel& model) {
    require(!body.joints.empty(), "body has no joints");
    HumanInstance h;
    h.mesh = body.mesh;
    h.root = body.joints[0];
    h.regions = model.regions();
    h.sdf = build_body_sdf(h.mesh.mesh);
    return h;
}

/// Observed mask with the derived lookups used by the reprojection loss.
struct MaskEvidence {
    BinaryImage mask;
    DistanceField outside_distance;  // distance to the nearest mask pixel center
    Points2 boundary;
    KdTree boundary_index;

    static MaskEvidence from(BinaryImage m) {
        require(m.count() > 0, "object mask is empty");
        MaskEvidence e;
        e.outside_distance = distance_transform(m);
        e.boundary = m.boundary_pixel_centers();
        e.boundary_index = KdTree::from_points(e.boundary);
        e.mask = std::move(m);
        return e;
    }
};

struct ObjectInstance {
    std::string category;
    PartLabeledMesh mesh;  // canonical exemplar
    RigidSimTransform transform;
    MaskEvidence evidence;
    InteractionMap interaction;
    std::size_t human = 0;  // index of the interacting human

    Points3 world_vertices() const { return transform.apply(mesh.mesh.vertices); }
};

struct SceneState {
    Camera camera;
    std::vector<HumanInstance> humans;
    std::vector<ObjectInstance> objects;

    void validate() const {
        camera.validate();
        for (const auto& h : humans) require(h.scale > 0.0, "human scale must be positive");
        for (const auto& o : objects) {
            require(o.transform.scale > 0.0, "object scale must be positive");
            require(o.human < humans.size() || (humans.empty() && o.interaction.pairs.empty()),
                    "object refers to a missing human");
            require(o.evidence.mask.width == camera.width && o.evidence.mask.height == camera.height,
                    "mask size differs from the camera image");
        }
    }
};

/// Target scales: objects by category, humans share one value.
struct SizePriors {
    std::map<std::string, double> objects;
    double human = 1.0;

    double object(const std::string& category) const {
        auto it = objects.find(category);
        if (it == objects.end()) fail(ErrorKind::MissingPrior, "no size prior for category \"" + category + "\"");
        return it->second;
    }
};

}  // namespace hoi
