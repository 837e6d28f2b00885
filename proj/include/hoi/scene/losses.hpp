#pragma once

#include "hoi/geometry/kdtree.hpp"
#include "hoi/geometry/normals.hpp"
#include "hoi/image/raster.hpp"
#include "hoi/scene/state.hpp"

#include <cmath>
#include <string>
#include <vector>

namespace hoi {

/// Gradient (or increment) over the scene variables: per object the scale,
/// a rotation increment applied on the left of the current rotation, and
/// the translation; per human the scale about the root.
struct SceneGradient {
    struct Object {
        double scale = 0.0;
        Vec3 rotation = Vec3::Zero();
        Vec3 translation = Vec3::Zero();
    };
    std::vector<Object> objects;
    std::vector<double> humans;

    static SceneGradient zeros(const SceneState& s) {
        SceneGradient g;
        g.objects.resize(s.objects.size());
        g.humans.assign(s.humans.size(), 0.0);
        return g;
    }

    Eigen::Index size() const { return static_cast<Eigen::Index>(7 * objects.size() + humans.size()); }

    Eigen::VectorXd flatten() const {
        Eigen::VectorXd x(size());
        Eigen::Index i = 0;
        for (const auto& o : objects) {
            x[i++] = o.scale;
            x.segment<3>(i) = o.rotation;
            x.segment<3>(i + 3) = o.translation;
            i += 6;
        }
        for (double h : humans) x[i++] = h;
        return x;
    }

    static SceneGradient unflatten(const Eigen::VectorXd& x, std::size_t n_objects, std::size_t n_humans) {
        require(x.size() == static_cast<Eigen::Index>(7 * n_objects + n_humans), "scene vector size mismatch");
        SceneGradient g;
        Eigen::Index i = 0;
        for (std::size_t o = 0; o < n_objects; ++o) {
            g.objects.push_back({x[i], x.segment<3>(i + 1), x.segment<3>(i + 4)});
            i += 7;
        }
        for (std::size_t h = 0; h < n_humans; ++h) g.humans.push_back(x[i++]);
        return g;
    }

    void add(const SceneGradient& other, double weight = 1.0) {
        for (std::size_t o = 0; o < objects.size(); ++o) {
            objects[o].scale += weight * other.objects[o].scale;
            objects[o].rotation += weight * other.objects[o].rotation;
            objects[o].translation += weight * other.objects[o].translation;
        }
        for (std::size_t h = 0; h < humans.size(); ++h) humans[h] += weight * other.humans[h];
    }
};

/// Applies an increment in the coordinates of SceneGradient.
inline void apply_increment(SceneState& state, const SceneGradient& d) {
    for (std::size_t o = 0; o < state.objects.size(); ++o) {
        auto& t = state.objects[o].transform;
        t.scale += d.objects[o].scale;
        t.rotation = axis_angle_from_rotation(rotation_from_axis_angle(d.objects[o].rotation) * t.rotation_matrix());
        t.translation += d.objects[o].translation;
    }
    for (std::size_t h = 0; h < state.humans.size(); ++h) state.humans[h].scale += d.humans[h];
}

struct LossConfig {
    double contact_normal_cos_max = 0.0;  // pair active iff cos(n_h, n_o) < this
    double mask_dead_zone = 1.5;           // pixels outside the mask that cost nothing
};

struct LossWeights {
    double contact = 1.0;
    double normal = 0.01;
    double penetration = 0.01;
    double scale = 0.01;
    double reprojection = 0.0005;
};

struct LossBreakdown {
    double contact = 0.0, normal = 0.0, penetration = 0.0, scale = 0.0, reprojection = 0.0, total = 0.0;

    void combine(const LossWeights& w) {
        total = w.contact * contact + w.normal * normal + w.penetration * penetration + w.scale * scale +
                w.reprojection * reprojection;
    }
    bool finite() const {
        return std::isfinite(contact) && std::isfinite(normal) && std::isfinite(penetration) && std::isfinite(scale) &&
               std::isfinite(reprojection) && std::isfinite(total);
    }
};

/// Quantities held constant within one evaluation: nearest-neighbour
/// correspondences, contact indicators, the penetration active set and the
/// rendered silhouette boundary.
struct SceneContext {
    struct Pair {
        std::size_t object = 0, human = 0;
        ContactPair labels;
        std::vector<std::uint32_t> object_vertices, body_vertices;
        std::vector<std::uint32_t> nearest;  // per object vertex, index into body_vertices
        Vec3 object_normal = Vec3::Zero();   // exemplar frame
        Vec3 body_normal = Vec3::Zero();
        bool normals_valid = false;
        bool active = false;
    };
    struct Penetration {
        std::size_t object = 0, human = 0;
        std::uint32_t vertex = 0;
    };
    struct Reprojection {
        std::vector<std::uint32_t> anchor;   // projected vertex each boundary sample rides on
        std::vector<Vec2> offset;            // sample = projection(anchor) + offset
        std::vector<std::size_t> to_mask;    // nearest mask boundary pixel per sample
        std::vector<std::size_t> from_mask;  // nearest sample per mask boundary pixel
        std::vector<bool> visible;           // vertex in front of the camera
    };
    std::vector<Pair> pairs;
    std::vector<Penetration> penetrating;
    std::vector<Reprojection> reprojection;
    std::vector<std::string> warnings;
};

namespace detail {

inline constexpr double kMinDepth = 1e-6;

// Gradient of a world point w.r.t. the object variables, accumulated into g.
inline void accumulate_object(SceneGradient::Object& g, const RigidSimTransform& t, const Vec3& rv, const Vec3& dw) {
    g.scale += dw.dot(rv);
    g.rotation += (t.scale * rv).cross(dw);
    g.translation += dw;
}

}  // namespace detail

inline SceneContext freeze_context(const SceneState& state, const LossConfig& config = {}) {
    state.validate();
    SceneContext ctx;
    for (std::size_t o = 0; o < state.objects.size(); ++o) {
        const auto& obj = state.objects[o];
        if (obj.interaction.pairs.empty()) continue;
        const auto& human = state.humans.at(obj.human);
        const Points3 world = obj.world_vertices();
        const Mat3 r = obj.transform.rotation_matrix();
        for (const auto& pair : obj.interaction.pairs) {
            SceneContext::Pair p;
            p.object = o;
            p.human = obj.human;
            p.labels = pair;
            const auto part = obj.mesh.find_part(pair.object_part);
            const auto region = resolve_body_region(human.mesh, human.regions, pair.body_part);
            if (!part || region.empty())
                fail(ErrorKind::MissingPart, "contact pair (" + pair.object_part + ", " + pair.body_part + "): " +
                                                 (!part ? "object part missing from exemplar" : "body part missing from body mesh"));
            p.object_vertices = obj.mesh.vertices_of(*part);
            p.body_vertices = human.mesh.vertices_of(region);
            require(!p.object_vertices.empty() && !p.body_vertices.empty(), "contact part has no vertices");
            Points3 body_pts;
            for (auto v : p.body_vertices) body_pts.push_back(human.world(human.mesh.mesh.vertices[v]));
            const KdTree index = KdTree::from_points(body_pts);
            for (auto v : p.object_vertices) p.nearest.push_back(static_cast<std::uint32_t>(index.nearest(world[v]).index));
            try {
                p.object_normal = part_mean_normal(obj.mesh, *part);
                p.body_normal = part_mean_normal(human.mesh, region);
                p.normals_valid = true;
            } catch (const Error& e) {
                if (e.kind() != ErrorKind::DegenerateNormal) throw;
                ctx.warnings.push_back("degenerate part normal for pair (" + pair.object_part + ", " + pair.body_part +
                                       "); normal term skipped, contact kept");
            }
            p.active = !p.normals_valid || p.body_normal.dot(r * p.object_normal) < config.contact_normal_cos_max;
            ctx.pairs.push_back(std::move(p));
        }
    }
    for (std::size_t o = 0; o < state.objects.size(); ++o) {
        const Points3 world = state.objects[o].world_vertices();
        for (std::size_t h = 0; h < state.humans.size(); ++h)
            for (std::uint32_t v = 0; v < world.size(); ++v)
                if (state.humans[h].signed_distance(world[v]).value < 0.0) ctx.penetrating.push_back({o, h, v});
    }
    for (const auto& obj : state.objects) {
        SceneContext::Reprojection rp;
        const Points3 world = obj.world_vertices();
        Points2 uv(world.size());
        std::vector<double> coords;
        std::vector<std::uint64_t> keys;
        rp.visible.resize(world.size());
        for (std::uint32_t v = 0; v < world.size(); ++v) {
            rp.visible[v] = world[v].z() > detail::kMinDepth;
            if (!rp.visible[v]) continue;
            uv[v] = state.camera.project(world[v]);
            coords.insert(coords.end(), {uv[v].x(), uv[v].y()});
            keys.push_back(v);
        }
        if (keys.empty()) fail(ErrorKind::BehindCamera, "object of category \"" + obj.category + "\" is entirely behind the camera");
        const KdTree vertex_index(coords, 2, keys);
        Points2 samples = render_silhouette(world, obj.mesh.mesh.faces, state.camera).boundary_pixel_centers();
        if (samples.empty())  // off-screen: fall back to the projected vertices
            for (auto k : keys) samples.push_back(uv[k]);
        for (const auto& s : samples) {
            const auto v = static_cast<std::uint32_t>(keys[vertex_index.nearest(s).index]);
            rp.anchor.push_back(v);
            rp.offset.push_back(s - uv[v]);
            rp.to_mask.push_back(obj.evidence.boundary_index.nearest(s).index);
        }
        const KdTree sample_index = KdTree::from_points(samples);
        for (const auto& m : obj.evidence.boundary) rp.from_mask.push_back(sample_index.nearest(m).index);
        ctx.reprojection.push_back(std::move(rp));
    }
    return ctx;
}

/// Sum over active pairs of the one-way Chamfer distance (mean Euclidean
/// distance) from the object part to its frozen nearest body-part vertices.
inline double loss_contact(const SceneState& state, const SceneContext& ctx, SceneGradient* grad = nullptr) {
    double total = 0.0;
    for (const auto& p : ctx.pairs) {
        if (!p.active) continue;
        const auto& obj = state.objects[p.object];
        const auto& human = state.humans[p.human];
        const Mat3 r = obj.transform.rotation_matrix();
        const double inv_n = 1.0 / static_cast<double>(p.object_vertices.size());
        for (std::size_t k = 0; k < p.object_vertices.size(); ++k) {
            const Vec3 rv = r * obj.mesh.mesh.vertices[p.object_vertices[k]];
            const Vec3 w = obj.transform.scale * rv + obj.transform.translation;
            const Vec3& hv = human.mesh.mesh.vertices[p.body_vertices[p.nearest[k]]];
            const Vec3 d = w - human.world(hv);
            const double dist = d.norm();
            total += inv_n * dist;
            if (grad && dist > 0.0) {
                const Vec3 dw = inv_n * d / dist;
                detail::accumulate_object(grad->objects[p.object], obj.transform, rv, dw);
                grad->humans[p.human] -= dw.dot(hv - human.root);
            }
        }
    }
    return total;
}

/// Sum over active pairs with valid normals of 1 + cos(n_h, n_o).
inline double loss_normal(const SceneState& state, const SceneContext& ctx, SceneGradient* grad = nullptr) {
    double total = 0.0;
    for (const auto& p : ctx.pairs) {
        if (!p.active || !p.normals_valid) continue;
        const Vec3 n_o = state.objects[p.object].transform.rotation_matrix() * p.object_normal;
        total += 1.0 + p.body_normal.dot(n_o);
        if (grad) grad->objects[p.object].rotation += n_o.cross(p.body_normal);
    }
    return total;
}

/// Sum of |f| over object vertices inside a body (f < 0), with f the
/// trilinearly sampled body SDF.
inline double loss_penetration(const SceneState& state, const SceneContext& ctx, SceneGradient* grad = nullptr) {
    double total = 0.0;
    for (const auto& a : ctx.penetrating) {
        const auto& obj = state.objects[a.object];
        const auto& human = state.humans[a.human];
        const Vec3 rv = obj.transform.rotation_matrix() * obj.mesh.mesh.vertices[a.vertex];
        const Vec3 w = obj.transform.scale * rv + obj.transform.translation;
        const Vec3 q = human.root + (w - human.root) / human.scale;
        const SdfSample f0 = sample_sdf_with_gradient(human.sdf, q);
        total -= human.scale * f0.value;
        if (grad) {
            detail::accumulate_object(grad->objects[a.object], obj.transform, rv, -f0.gradient);
            grad->humans[a.human] -= f0.value - f0.gradient.dot(w - human.root) / human.scale;
        }
    }
    return total;
}

/// Sum of squared deviations of every scale from its prior.
inline double loss_scale(const SceneState& state, const SizePriors& priors, SceneGradient* grad = nullptr) {
    double total = 0.0;
    for (std::size_t o = 0; o < state.objects.size(); ++o) {
        const double d = state.objects[o].transform.scale - priors.object(state.objects[o].category);
        total += d * d;
        if (grad) grad->objects[o].scale += 2.0 * d;
    }
    for (std::size_t h = 0; h < state.humans.size(); ++h) {
        const double d = state.humans[h].scale - priors.human;
        total += d * d;
        if (grad) grad->humans[h] += 2.0 * d;
    }
    return total;
}

/// Per object, in squared pixels: projected vertices beyond the dead zone
/// around the mask, plus both directions of the Chamfer sum between the
/// rendered silhouette boundary and the mask boundary.
inline double loss_reprojection(const SceneState& state, const SceneContext& ctx, const LossConfig& config = {},
                                SceneGradient* grad = nullptr) {
    double total = 0.0;
    for (std::size_t o = 0; o < state.objects.size(); ++o) {
        const auto& obj = state.objects[o];
        const auto& rp = ctx.reprojection[o];
        const Mat3 r = obj.transform.rotation_matrix();
        const auto& verts = obj.mesh.mesh.vertices;
        auto world = [&](std::uint32_t v) { return Vec3(obj.transform.scale * (r * verts[v]) + obj.transform.translation); };
        auto push = [&](std::uint32_t v, const Vec2& d_uv) {
            if (!grad) return;
            const Vec3 w = world(v);
            detail::accumulate_object(grad->objects[o], obj.transform, r * verts[v],
                                      state.camera.project_jacobian(w).transpose() * d_uv);
        };
        auto projected = [&](std::uint32_t v) {
            const Vec3 w = world(v);
            if (w.z() <= detail::kMinDepth) fail(ErrorKind::BehindCamera, "object vertex crossed behind the camera");
            return state.camera.project(w);
        };

        for (std::uint32_t v = 0; v < verts.size(); ++v) {
            if (!rp.visible[v]) continue;
            const auto s = obj.evidence.outside_distance.sample(projected(v));
            const double excess = s.value - config.mask_dead_zone;
            if (excess <= 0.0) continue;
            total += excess * excess;
            push(v, 2.0 * excess * s.gradient);
        }
        std::vector<Vec2> samples(rp.anchor.size());
        for (std::size_t i = 0; i < rp.anchor.size(); ++i) samples[i] = projected(rp.anchor[i]) + rp.offset[i];
        for (std::size_t i = 0; i < samples.size(); ++i) {
            const Vec2 d = samples[i] - obj.evidence.boundary[rp.to_mask[i]];
            total += d.squaredNorm();
            push(rp.anchor[i], 2.0 * d);
        }
        for (std::size_t m = 0; m < rp.from_mask.size(); ++m) {
            const std::size_t i = rp.from_mask[m];
            const Vec2 d = samples[i] - obj.evidence.boundary[m];
            total += d.squaredNorm();
            push(rp.anchor[i], 2.0 * d);
        }
    }
    return total;
}

/// Weighted objective; `grad` receives the gradient of `total`.
inline LossBreakdown total_loss(const SceneState& state, const SceneContext& ctx, const SizePriors& priors,
                                const LossWeights& weights = {}, const LossConfig& config = {},
                                SceneGradient* grad = nullptr) {
    LossBreakdown b;
    SceneGradient g = SceneGradient::zeros(state);
    auto term = [&](double weight, auto&& fn) {
        if (!grad) return fn(nullptr);
        SceneGradient part = SceneGradient::zeros(state);
        const double v = fn(&part);
        g.add(part, weight);
        return v;
    };
    b.contact = term(weights.contact, [&](SceneGradient* p) { return loss_contact(state, ctx, p); });
    b.normal = term(weights.normal, [&](SceneGradient* p) { return loss_normal(state, ctx, p); });
    b.penetration = term(weights.penetration, [&](SceneGradient* p) { return loss_penetration(state, ctx, p); });
    b.scale = term(weights.scale, [&](SceneGradient* p) { return loss_scale(state, priors, p); });
    b.reprojection = term(weights.reprojection, [&](SceneGradient* p) { return loss_reprojection(state, ctx, config, p); });
    b.combine(weights);
    if (grad) *grad = std::move(g);
    return b;
}

inline LossBreakdown total_loss(const SceneState& state, const SizePriors& priors, const LossWeights& weights = {},
                                const LossConfig& config = {}) {
    return total_loss(state, freeze_context(state, config), priors, weights, config);
}

}  // namespace hoi
