#include "hoi/geometry/chamfer.hpp"
#include "hoi/geometry/primitives.hpp"
#include "hoi/scene/init_pose.hpp"
#include "hoi/scene/optimize.hpp"
#include "hoi/synthetic/sit_scene.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace hoi;

namespace {

const SyntheticScene& sit_scene() {
    static const SyntheticScene scene = make_sit_scene();
    return scene;
}

SizePriors chair_priors(double chair = 0.85) {
    SizePriors p;
    p.objects["chair"] = chair;
    return p;
}

Camera small_camera() { return {300, 300, 160, 120, 320, 240}; }

// One labelled triangle-pair patch ("plate") with a given normal, as an
// object or body part with a well-defined mean normal.
PartLabeledMesh plate(const std::string& name, const Vec3& center, const Vec3& normal, double half = 0.05) {
    const Vec3 n = normal.normalized();
    const Vec3 a = n.unitOrthogonal(), b = n.cross(a);
    PartLabeledMesh m;
    m.mesh.vertices = {center - half * a - half * b, center + half * a - half * b, center + half * a + half * b,
                       center - half * a + half * b};
    m.mesh.faces = {{0, 1, 2}, {0, 2, 3}};
    m.mesh.update_normals();
    m.part_names[0] = name;
    m.part_of_vertex.assign(4, 0);
    return m;
}

HumanInstance human_from(const PartLabeledMesh& mesh) {
    HumanInstance h;
    h.mesh = mesh;
    h.root = Vec3::Zero();
    h.sdf = build_body_sdf(mesh.mesh);
    return h;
}

ObjectInstance object_from(const PartLabeledMesh& mesh, const Camera& camera, const std::string& category = "chair") {
    ObjectInstance o;
    o.category = category;
    o.mesh = mesh;
    BinaryImage m(camera.width, camera.height);
    m.set(camera.width / 2, camera.height / 2);
    o.evidence = MaskEvidence::from(m);
    return o;
}

// Single pair: object plate vs body plate, positioned by the caller.
SceneState plate_scene(const Vec3& body_normal, const Vec3& object_normal, const Vec3& object_center) {
    SceneState s;
    s.camera = small_camera();
    s.humans.push_back(human_from(plate("butt", Vec3(0, 0, 3), body_normal)));
    s.humans[0].root = Vec3(0, 0, 3);
    ObjectInstance o = object_from(plate("chair seat", Vec3::Zero(), object_normal), s.camera);
    o.transform.translation = object_center;
    o.interaction = {"sit", "chair", {{"chair seat", "butt"}}};
    s.objects.push_back(std::move(o));
    return s;
}

double relative_error(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
    return (a - b).norm() / std::max({a.norm(), b.norm(), 1e-12});
}

using LossFn = std::function<double(const SceneState&, SceneGradient*)>;

Eigen::VectorXd central_differences(const SceneState& state, const LossFn& f, double h) {
    const std::size_t no = state.objects.size(), nh = state.humans.size();
    const Eigen::Index n = static_cast<Eigen::Index>(7 * no + nh);
    Eigen::VectorXd g(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        Eigen::VectorXd e = Eigen::VectorXd::Zero(n);
        e[i] = h;
        SceneState plus = state, minus = state;
        apply_increment(plus, SceneGradient::unflatten(e, no, nh));
        apply_increment(minus, SceneGradient::unflatten(-e, no, nh));
        g[i] = (f(plus, nullptr) - f(minus, nullptr)) / (2 * h);
    }
    return g;
}

SceneState random_sit_state(std::mt19937_64& rng) {
    std::normal_distribution<double> n(0.0, 1.0);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    SceneState s = sit_scene().state;
    perturb_object(s.objects[0], 0.08 * Vec3(n(rng), n(rng), n(rng)), 0.12 * Vec3(n(rng), n(rng), n(rng)),
                   1.0 + 0.1 * u(rng));
    s.humans[0].scale = 1.0 + 0.15 * u(rng);
    return s;
}

}  // namespace

TEST(SceneGradients, AllLossesMatchCentralDifferences) {
    std::mt19937_64 rng(20240611);
    const SizePriors priors = chair_priors();
    int penetrating_states = 0;
    for (int trial = 0; trial < 20; ++trial) {
        const SceneState state = random_sit_state(rng);
        const SceneContext ctx = freeze_context(state);
        penetrating_states += !ctx.penetrating.empty();
        const std::vector<std::pair<std::string, LossFn>> losses{
            {"contact", [&](const SceneState& s, SceneGradient* g) { return loss_contact(s, ctx, g); }},
            {"normal", [&](const SceneState& s, SceneGradient* g) { return loss_normal(s, ctx, g); }},
            {"penetration", [&](const SceneState& s, SceneGradient* g) { return loss_penetration(s, ctx, g); }},
            {"scale", [&](const SceneState& s, SceneGradient* g) { return loss_scale(s, priors, g); }},
            {"reprojection", [&](const SceneState& s, SceneGradient* g) { return loss_reprojection(s, ctx, {}, g); }},
            {"total", [&](const SceneState& s, SceneGradient* g) { return total_loss(s, ctx, priors, {}, {}, g).total; }},
        };
        for (const auto& [name, f] : losses) {
            SceneGradient g = SceneGradient::zeros(state);
            f(state, &g);
            const Eigen::VectorXd analytic = g.flatten();
            const Eigen::VectorXd numeric = central_differences(state, f, 1e-7);
            EXPECT_LT(relative_error(analytic, numeric), 1e-4) << name << " trial " << trial << "\nanalytic "
                                                               << analytic.transpose() << "\nnumeric  "
                                                               << numeric.transpose();
        }
    }
    EXPECT_GE(penetrating_states, 5);
}

TEST(LossContact, CoincidentPartsGiveZero) {
    SceneState s = plate_scene(Vec3(0, 0, -1), Vec3(0, 0, 1), Vec3(0, 0, 3));
    EXPECT_NEAR(loss_contact(s, freeze_context(s)), 0.0, 1e-12);
}

TEST(LossContact, TenCentimetreOffsetGivesPointOne) {
    // Opposing normals keep the indicator on; the plate sits 10 cm off the body plate.
    SceneState s = plate_scene(Vec3(0, 0, -1), Vec3(0, 0, 1), Vec3(0, 0, 2.9));
    const SceneContext ctx = freeze_context(s);
    ASSERT_TRUE(ctx.pairs.at(0).active);
    EXPECT_NEAR(loss_contact(s, ctx), 0.10, 1e-12);
}

TEST(LossContact, InactiveIndicatorGivesZero) {
    SceneState s = plate_scene(Vec3(0, 0, 1), Vec3(0, 0, 1), Vec3(0.3, 0.2, 2.5));
    const SceneContext ctx = freeze_context(s);
    ASSERT_FALSE(ctx.pairs.at(0).active);
    EXPECT_EQ(loss_contact(s, ctx), 0.0);
    EXPECT_EQ(loss_normal(s, ctx), 0.0);
}

TEST(LossContact, MissingPartNamesThePair) {
    SceneState s = plate_scene(Vec3(0, 0, -1), Vec3(0, 0, 1), Vec3(0, 0, 2.9));
    s.objects[0].interaction.pairs = {{"chair seat", "left ear"}};
    try {
        freeze_context(s);
        FAIL() << "expected missing-part";
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::MissingPart);
        EXPECT_NE(std::string(e.what()).find("chair seat, left ear"), std::string::npos);
    }
}

TEST(LossContact, EmptyInteractionMapGivesZero) {
    SceneState s = plate_scene(Vec3(0, 0, -1), Vec3(0, 0, 1), Vec3(0, 0, 2.5));
    s.objects[0].interaction.pairs.clear();
    const SceneContext ctx = freeze_context(s);
    EXPECT_EQ(loss_contact(s, ctx), 0.0);
    EXPECT_EQ(loss_normal(s, ctx), 0.0);
}

TEST(LossNormal, OpposingNormalsGiveZero) {
    SceneState s = plate_scene(Vec3(0, 0, -1), Vec3(0, 0, 1), Vec3(0, 0, 2.9));
    EXPECT_NEAR(loss_normal(s, freeze_context(s)), 0.0, 1e-12);
}

TEST(LossNormal, IdenticalNormalsForcedActiveGiveTwo) {
    SceneState s = plate_scene(Vec3(0, 1, 0), Vec3(0, 1, 0), Vec3(0, 0, 2.9));
    LossConfig always;
    always.contact_normal_cos_max = 2.0;
    EXPECT_NEAR(loss_normal(s, freeze_context(s, always)), 2.0, 1e-12);
}

TEST(LossNormal, NormalsAt120DegreesGiveOneHalf) {
    const double a = 2.0 * std::numbers::pi / 3.0;
    SceneState s = plate_scene(Vec3(0, 1, 0), Vec3(std::sin(a), std::cos(a), 0), Vec3(0, 0, 2.9));
    const SceneContext ctx = freeze_context(s);
    ASSERT_TRUE(ctx.pairs[0].active);
    EXPECT_NEAR(loss_normal(s, ctx), 0.5, 1e-12);
}

TEST(LossNormal, DegenerateNormalSkipsNormalKeepsContact) {
    SceneState s = plate_scene(Vec3(0, 0, -1), Vec3(0, 0, 1), Vec3(0, 0, 2.9));
    PartLabeledMesh cube;
    cube.mesh = make_box(Vec3(0, 0, 3), Vec3::Constant(0.05));
    cube.part_names[0] = "butt";
    cube.part_of_vertex.assign(cube.mesh.vertices.size(), 0);
    s.humans[0] = human_from(cube);
    const SceneContext ctx = freeze_context(s);
    ASSERT_EQ(ctx.warnings.size(), 1u);
    EXPECT_TRUE(ctx.pairs[0].active);
    EXPECT_FALSE(ctx.pairs[0].normals_valid);
    EXPECT_EQ(loss_normal(s, ctx), 0.0);
    EXPECT_GT(loss_contact(s, ctx), 0.0);
}

TEST(LossPenetration, ObjectOutsideBodyGivesZero) {
    SceneState s = sit_scene().state;
    s.objects[0].transform.translation += Vec3(2.0, 0, 0);
    const SceneContext ctx = freeze_context(s);
    EXPECT_TRUE(ctx.penetrating.empty());
    EXPECT_EQ(loss_penetration(s, ctx), 0.0);
}

TEST(LossPenetration, VertexAtCapsuleCenterMatchesAnalyticDepth) {
    // Capsule along x, radius 0.2; at the center the analytic SDF is -0.2.
    const double radius = 0.2;
    PartLabeledMesh body;
    body.mesh = make_capsule(Vec3(-0.4, 0, 3), Vec3(0.4, 0, 3), radius, 8, 32);
    body.part_names[0] = "body";
    body.part_of_vertex.assign(body.mesh.vertices.size(), 0);
    SceneState s;
    s.camera = small_camera();
    s.humans.push_back(human_from(body));
    PartLabeledMesh point;
    point.mesh.vertices = {Vec3::Zero(), Vec3(1, 0, 0), Vec3(0, 1, 0)};
    point.mesh.faces = {{0, 1, 2}};
    point.part_names[0] = "p";
    point.part_of_vertex.assign(3, 0);
    ObjectInstance o = object_from(point, s.camera);
    o.transform.translation = Vec3(0, 0, 3);
    s.objects.push_back(std::move(o));
    const SceneContext ctx = freeze_context(s);
    ASSERT_EQ(ctx.penetrating.size(), 1u);
    // Trilinear interpolation of a 1-Lipschitz field errs by at most half a
    // cell diagonal; faceting of the capsule adds under 1% of the radius.
    const double bound = 0.5 * s.humans[0].sdf.cell.norm() + 0.01 * radius;
    EXPECT_NEAR(loss_penetration(s, ctx), radius, bound);
}

TEST(LossPenetration, NonIncreasingWhileMovingAway) {
    // Box starting inside a capsule, pushed out perpendicular to its axis.
    PartLabeledMesh body;
    body.mesh = make_capsule(Vec3(-0.4, 0, 3), Vec3(0.4, 0, 3), 0.2, 8, 32);
    body.part_names[0] = "body";
    body.part_of_vertex.assign(body.mesh.vertices.size(), 0);
    PartLabeledMesh box;
    box.mesh = make_box(Vec3(0, 0.03, 0), Vec3(0.05, 0.03, 0.05), 2);
    box.part_names[0] = "box";
    box.part_of_vertex.assign(box.mesh.vertices.size(), 0);
    SceneState s;
    s.camera = small_camera();
    s.humans.push_back(human_from(body));
    s.objects.push_back(object_from(box, s.camera));
    double previous = std::numeric_limits<double>::infinity();
    double first = 0.0;
    for (int k = 0; k <= 20; ++k) {
        s.objects[0].transform.translation = Vec3(0, 0.02 * k, 3);
        const double v = loss_penetration(s, freeze_context(s));
        if (k == 0) first = v;
        EXPECT_LE(v, previous + 1e-12) << "step " << k;
        previous = v;
    }
    EXPECT_GT(first, 0.0);
    EXPECT_EQ(previous, 0.0);
}

TEST(LossPenetration, ZeroIffNoVertexInside) {
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 20; ++trial) {
        const SceneState s = random_sit_state(rng);
        const SceneContext ctx = freeze_context(s);
        bool inside = false;
        for (const auto& p : s.objects[0].world_vertices()) inside |= s.humans[0].signed_distance(p).value < 0;
        EXPECT_EQ(loss_penetration(s, ctx) > 0.0, inside);
    }
}

TEST(LossScale, Examples) {
    SceneState s = sit_scene().state;
    s.objects[0].transform.scale = 0.85;
    EXPECT_EQ(loss_scale(s, chair_priors()), 0.0);
    s.objects[0].transform.scale = 1.0;
    EXPECT_NEAR(loss_scale(s, chair_priors()), 0.0225, 1e-15);
    const double delta = 0.037;
    s.objects[0].transform.scale = 0.85 + delta;
    SceneGradient g = SceneGradient::zeros(s);
    loss_scale(s, chair_priors(), &g);
    EXPECT_NEAR(g.objects[0].scale, 2 * delta, 1e-12);
    EXPECT_EQ(g.humans[0], 0.0);
}

TEST(LossScale, MissingPriorThrows) {
    SceneState s = sit_scene().state;
    SizePriors none;
    try {
        loss_scale(s, none);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::MissingPrior);
    }
}

TEST(LossReprojection, SelfRenderedMaskIsNearZero) {
    const SceneState& s = sit_scene().state;
    EXPECT_LT(loss_reprojection(s, freeze_context(s)), 1e-3);
}

TEST(LossReprojection, MissedMaskIsAboveDistanceBound) {
    SceneState s = sit_scene().state;
    s.objects[0].interaction.pairs.clear();
    const auto& cam = s.camera;
    auto& t = s.objects[0].transform.translation;
    t.x() += 1.6;  // projection moves clear of the mask
    const SceneContext ctx = freeze_context(s);
    const Points3 w = s.objects[0].world_vertices();
    Vec2 centroid = Vec2::Zero();
    for (const auto& p : w) centroid += cam.project(p);
    centroid /= static_cast<double>(w.size());
    ASSERT_GT(s.objects[0].evidence.outside_distance.sample(centroid).value, 20.0);
    // Every mask boundary pixel is at least the gap away from the rendered
    // boundary, so the mask -> rendered term alone exceeds count * gap^2,
    // with gap the distance from the projection's bounding box to the mask.
    double gap = std::numeric_limits<double>::infinity();
    for (const auto& p : w) gap = std::min(gap, s.objects[0].evidence.outside_distance.sample(cam.project(p)).value);
    ASSERT_GT(gap, 5.0);
    const double n = static_cast<double>(s.objects[0].evidence.boundary.size());
    EXPECT_GE(loss_reprojection(s, ctx), n * (gap - 1.0) * (gap - 1.0));
}

TEST(LossReprojection, InvariantUnderJointImageShift) {
    SceneState s = sit_scene().state;
    s.objects[0].interaction.pairs.clear();
    s.objects[0].transform.translation += Vec3(0.05, -0.03, 0.1);  // some residual to be invariant about
    const double before = loss_reprojection(s, freeze_context(s));
    ASSERT_GT(before, 1.0);
    // Shift the principal point by whole pixels and the mask by the same amount.
    const int dx = 7, dy = -4;
    SceneState shifted = s;
    shifted.camera.cx += dx;
    shifted.camera.cy += dy;
    const BinaryImage& m = s.objects[0].evidence.mask;
    BinaryImage moved(m.width, m.height);
    for (int y = 0; y < m.height; ++y)
        for (int x = 0; x < m.width; ++x)
            if (m.at(x, y)) moved.set(x + dx, y + dy);
    shifted.objects[0].evidence = MaskEvidence::from(moved);
    EXPECT_NEAR(loss_reprojection(shifted, freeze_context(shifted)), before, 1e-6 * before);
}

TEST(LossReprojection, FullyBehindCameraThrows) {
    SceneState s = sit_scene().state;
    s.objects[0].transform.translation.z() = -5.0;
    try {
        freeze_context(s);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::BehindCamera);
    }
}

TEST(TotalLoss, WeightedExamples) {
    LossBreakdown b;
    b.combine({});
    EXPECT_EQ(b.total, 0.0);
    b.contact = 1.0;
    b.combine({});
    EXPECT_EQ(b.total, 1.0);
    b.contact = 0.0;
    b.scale = 2.0;
    b.combine({});
    EXPECT_NEAR(b.total, 0.02, 1e-15);
}

TEST(TotalLoss, DecompositionIdentity) {
    std::mt19937_64 rng(9);
    const LossWeights w;
    for (int trial = 0; trial < 10; ++trial) {
        const SceneState s = random_sit_state(rng);
        const LossBreakdown b = total_loss(s, chair_priors());
        EXPECT_NEAR(b.total,
                    b.contact + w.normal * b.normal + w.penetration * b.penetration + w.scale * b.scale +
                        w.reprojection * b.reprojection,
                    1e-9);
        for (double v : {b.contact, b.normal, b.penetration, b.scale, b.reprojection}) EXPECT_GE(v, 0.0);
    }
}

TEST(TotalLoss, IndicatorDependsOnlyOnPartNormals) {
    // Translating and scaling the object changes distances but not normals.
    std::mt19937_64 rng(3);
    SceneState s = random_sit_state(rng);
    const auto a = freeze_context(s);
    s.objects[0].transform.translation += Vec3(0.2, -0.1, 0.3);
    s.objects[0].transform.scale *= 1.3;
    s.humans[0].scale = 0.8;
    const auto b = freeze_context(s);
    ASSERT_EQ(a.pairs.size(), b.pairs.size());
    for (std::size_t i = 0; i < a.pairs.size(); ++i) EXPECT_EQ(a.pairs[i].active, b.pairs[i].active);
}

TEST(OptimizeScene, FixedPointStaysPut) {
    SceneState s = sit_scene().state;
    s.humans.clear();
    s.objects[0].interaction.pairs.clear();
    s.objects[0].transform.scale = 0.85;  // at the prior, mask re-rendered at this scale
    const Points3 w = s.objects[0].world_vertices();
    s.objects[0].evidence = MaskEvidence::from(render_silhouette(w, s.objects[0].mesh.mesh.faces, s.camera));
    OptimizeConfig config;
    config.steps = 50;
    const OptimizeResult r = optimize_scene(s, chair_priors(), config);
    EXPECT_FALSE(r.aborted);
    const auto& t0 = s.objects[0].transform;
    const auto& t1 = r.state.objects[0].transform;
    EXPECT_NEAR(t1.scale, t0.scale, 1e-12);
    EXPECT_LT((t1.translation - t0.translation).norm(), 1e-12);
    EXPECT_LT(rotation_angle_between(t1.rotation_matrix(), t0.rotation_matrix()), 1e-9);
    EXPECT_LT(r.trace.back().total, 1e-6);
}

TEST(OptimizeScene, TraceHasStepsPlusOneEntries) {
    OptimizeConfig config;
    config.steps = 7;
    const OptimizeResult r = optimize_scene(sit_scene().state, chair_priors(), config);
    EXPECT_EQ(r.trace.size(), 8u);
    for (const auto& b : r.trace) EXPECT_TRUE(b.finite());
}

TEST(OptimizeScene, NonFiniteLossAbortsWithBestState) {
    SceneState s = sit_scene().state;
    const OptimizeResult r = optimize_scene(s, chair_priors(std::numeric_limits<double>::quiet_NaN()));
    EXPECT_TRUE(r.aborted);
    EXPECT_NE(r.diagnostic.find("non-finite"), std::string::npos);
    EXPECT_TRUE(r.trace.empty());
    EXPECT_EQ(r.state.objects[0].transform.translation, s.objects[0].transform.translation);
}

TEST(OptimizeScene, ReducesObjectErrorOnPerturbedSitScene) {
    const SyntheticScene& gt = sit_scene();
    SceneState s = gt.state;
    perturb_object(s.objects[0], Vec3(0.1, -0.08, 0.12), Vec3(0.1, 0.15, -0.05), 1.15);
    const double before = symmetric_chamfer(s.objects[0].world_vertices(), gt.object_vertices);
    const OptimizeResult r = optimize_scene(s, chair_priors());
    const double after = symmetric_chamfer(r.state.objects[0].world_vertices(), gt.object_vertices);
    EXPECT_FALSE(r.aborted);
    EXPECT_LT(after, before / 5.0);
    EXPECT_LT(r.trace.back().total, r.trace.front().total);
}

TEST(InitObjectPose, RecoversRenderedPose) {
    const auto& exemplar = sit_scene().state.objects[0].mesh;
    const Camera cam = sit_scene().state.camera;
    RigidSimTransform truth;
    truth.scale = 0.85;
    truth.rotation = axis_angle_from_rotation(rotation_from_axis_angle(Vec3(0.05, 0, 0.03)) * upright_rotation(0.6));
    truth.translation = Vec3(0.15, 0.1, 3.2);
    const BinaryImage mask = render_silhouette(truth.apply(exemplar.mesh.vertices), exemplar.mesh.faces, cam);
    const InitPoseResult r = init_object_pose(exemplar, mask, cam, 0.85);
    EXPECT_EQ(r.transform.scale, 0.85);
    EXPECT_LT((r.transform.translation - truth.translation).norm(), 0.05 * truth.translation.z());
    EXPECT_LT(rotation_angle_between(r.transform.rotation_matrix(), truth.rotation_matrix()), 10.0 * std::numbers::pi / 180);
    EXPECT_GT(r.iou, 0.5);
    EXPECT_TRUE(r.warnings.empty());
}

TEST(InitObjectPose, CentroidAtPrincipalPointStartsOnAxis) {
    const Camera cam = small_camera();
    BinaryImage mask(cam.width, cam.height);
    for (int y = 100; y < 140; ++y)
        for (int x = 140; x < 180; ++x) mask.set(x, y);
    ASSERT_EQ(mask.centroid(), Vec2(cam.cx, cam.cy));
    const PartLabeledMesh& exemplar = sit_scene().state.objects[0].mesh;
    Points3 rs = exemplar.mesh.vertices;
    for (auto& p : rs) p = 0.85 * (upright_rotation(0.0) * p);
    const Vec3 t = detail::similar_triangles_translation(rs, cam, mask.centroid(), 40.0);
    EXPECT_NEAR(t.x(), 0.0, 1e-12);
    EXPECT_NEAR(t.y(), 0.0, 1e-12);
    EXPECT_GT(t.z(), 0.0);
}

TEST(InitObjectPose, DoublingSizePriorDoublesDepth) {
    const Camera cam = sit_scene().state.camera;
    const PartLabeledMesh& exemplar = sit_scene().state.objects[0].mesh;
    const Vec2 c(200.0, 150.0);
    for (double s : {0.5, 0.85}) {
        Points3 a = exemplar.mesh.vertices, b = a;
        for (auto& p : a) p = s * (upright_rotation(0.4) * p);
        for (auto& p : b) p = 2 * s * (upright_rotation(0.4) * p);
        const Vec3 ta = detail::similar_triangles_translation(a, cam, c, 60.0);
        const Vec3 tb = detail::similar_triangles_translation(b, cam, c, 60.0);
        EXPECT_NEAR(tb.z() / ta.z(), 2.0, 1e-6);
    }
}

TEST(InitObjectPose, MaskChecks) {
    const Camera cam = small_camera();
    const PartLabeledMesh& exemplar = sit_scene().state.objects[0].mesh;
    try {
        init_object_pose(exemplar, BinaryImage(cam.width, cam.height), cam, 0.85);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::InvalidInput);
    }
    BinaryImage small(cam.width, cam.height);
    for (int y = 0; y < 5; ++y)
        for (int x = 0; x < 5; ++x) small.set(150 + x, 110 + y);
    InitPoseConfig config;
    config.yaw_hypotheses = 2;
    config.iterations = 2;
    const auto r = init_object_pose(exemplar, small, cam, 0.85, config);
    ASSERT_EQ(r.warnings.size(), 1u);
    EXPECT_NE(r.warnings[0].find("unreliable-init"), std::string::npos);
}
