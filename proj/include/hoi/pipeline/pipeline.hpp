#pragma once

#include "hoi/body/fitting.hpp"
#include "hoi/body/test_body.hpp"
#include "hoi/eval/metrics.hpp"
#include "hoi/exemplars/rank.hpp"
#include "hoi/geometry/mesh_io.hpp"
#include "hoi/image/raster.hpp"
#include "hoi/pipeline/scene_file.hpp"
#include "hoi/priors/priors.hpp"
#include "hoi/retrieval/pose_database.hpp"
#include "hoi/scene/optimize.hpp"

#include <nlohmann/json.hpp>

#include <filesystem>
#include <fstream>
#include <iomanip>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace hoi {

/// A pipeline stage ("body", "retrieve", "priors", "init", "optimize",
/// "evaluate") that could not complete.
class StageFailure : public Error {
public:
    StageFailure(std::string stage, const Error& cause)
        : Error(cause.kind(), "stage " + stage + " failed: " + detail_of(cause)), stage(std::move(stage)) {}
    StageFailure(std::string stage, ErrorKind kind, const std::string& message)
        : Error(kind, "stage " + stage + " failed: " + message), stage(std::move(stage)) {}
    std::string stage;

private:
    static std::string detail_of(const Error& e) {
        const std::string what = e.what(), prefix = std::string(to_string(e.kind())) + ": ";
        return what.rfind(prefix, 0) == 0 ? what.substr(prefix.size()) : what;
    }
};

struct PipelineOptions {
    int steps = 500;
    double learning_rate = 2e-3;
    LossWeights weights;
    std::optional<std::string> action;  // skips retrieval when set
    std::size_t candidates = 5;         // ranked exemplars optimized per object
    RefineConfig body;
    InitPoseConfig init;
};

struct ObjectOutcome {
    std::string category;
    std::vector<RankedExemplar> ranked;
    std::size_t chosen = 0;  // position in `ranked`
    double size_prior = 0.0;
    InteractionMap interaction;
    std::optional<RetrievalResult> retrieval;
};

struct PipelineResult {
    BodyParams body;
    std::vector<double> body_energy;
    std::string action;
    bool action_overridden = false;
    std::vector<ObjectOutcome> objects;
    OptimizeResult optimized;
    std::optional<ReconstructionError> evaluation;
    std::vector<std::string> warnings;
};

namespace detail {

template <class F>
auto run_stage(const std::string& stage, F&& f) -> decltype(f()) {
    try {
        return f();
    } catch (const StageFailure&) {
        throw;
    } catch (const Error& e) {
        throw StageFailure(stage, e);
    } catch (const std::exception& e) {
        throw StageFailure(stage, ErrorKind::InvalidInput, e.what());
    }
}

inline std::vector<double> pose_values(const BodyParams& p) { return {p.pose.data(), p.pose.data() + p.pose.size()}; }

inline PartVocabulary vocabulary_for(const std::string& category, const PartLabeledMesh& exemplar) {
    if (has_object_vocabulary(category)) return object_vocabulary(category);
    std::vector<std::string> names;
    for (const auto& [id, name] : exemplar.part_names) names.push_back(name);
    return object_vocabulary(category, names);
}

}  // namespace detail

/// Body refinement, action retrieval, prior queries, exemplar ranking and
/// joint optimization, with optional evaluation against ground truth. Every
/// ranked candidate (the same rank for all objects) is optimized and the
/// lowest final total wins; ties go to the better-ranked candidate.
inline PipelineResult run_pipeline(const SceneSpec& spec, CompletionClient& client, const PipelineOptions& options = {}) {
    PipelineResult result;
    const ArticulatedTestBody model;

    detail::run_stage("body", [&] {
        RefineResult r = refine_body(spec.body_init, model, spec.keypoints, spec.camera, options.body);
        result.body = r.params;
        result.body_energy = std::move(r.energy_trace);
    });

    std::vector<ExemplarSet> sets;
    detail::run_stage("init", [&] {
        for (const auto& o : spec.objects) sets.push_back(read_exemplar_set(o.exemplars));
    });

    result.objects.resize(spec.objects.size());
    detail::run_stage("retrieve", [&] {
        if (options.action) {
            require(!options.action->empty(), "action override is empty");
            result.action = *options.action;
            result.action_overridden = true;
            return;
        }
        const PoseDatabase db(read_pose_entries(spec.pose_database));
        for (std::size_t i = 0; i < spec.objects.size(); ++i)
            result.objects[i].retrieval = db.retrieve(detail::pose_values(result.body), spec.objects[i].category);
        result.action = result.objects[0].retrieval->label.verb;
    });

    SizePriors priors;
    detail::run_stage("priors", [&] {
        for (std::size_t i = 0; i < spec.objects.size(); ++i) {
            auto& out = result.objects[i];
            out.category = spec.objects[i].category;
            const std::string action = out.retrieval ? out.retrieval->label.verb : result.action;
            out.size_prior = query_object_size(out.category, client).size;
            out.interaction = query_contacts(action, out.category, client,
                                             detail::vocabulary_for(out.category, sets[i].exemplars.front().mesh),
                                             body_vocabulary());
            priors.objects[out.category] = out.size_prior;
        }
    });

    std::vector<BinaryImage> masks;
    detail::run_stage("init", [&] {
        for (std::size_t i = 0; i < spec.objects.size(); ++i) {
            masks.push_back(read_png_mask(spec.objects[i].mask));
            if (masks.back().width != spec.camera.width || masks.back().height != spec.camera.height)
                fail(ErrorKind::InvalidInput, "mask " + spec.objects[i].mask.string() + " does not match the camera size");
            result.objects[i].ranked = rank_exemplars(sets[i], masks.back(), spec.camera, result.objects[i].size_prior,
                                                      std::max<std::size_t>(1, options.candidates), options.init);
            for (const auto& w : result.objects[i].ranked.front().pose.warnings)
                result.warnings.push_back(spec.objects[i].category + ": " + w);
        }
    });

    detail::run_stage("optimize", [&] {
        SceneState base;
        base.camera = spec.camera;
        base.humans.push_back(make_human(model.evaluate(result.body), model));
        std::size_t rounds = 0;
        for (const auto& o : result.objects) rounds = std::max(rounds, o.ranked.size());
        OptimizeConfig config;
        config.steps = options.steps;
        config.learning_rate = options.learning_rate;
        config.weights = options.weights;
        std::optional<std::size_t> best;
        for (std::size_t c = 0; c < rounds; ++c) {
            SceneState state = base;
            for (std::size_t i = 0; i < spec.objects.size(); ++i) {
                const auto& out = result.objects[i];
                const auto& ranked = out.ranked[std::min(c, out.ranked.size() - 1)];
                ObjectInstance obj;
                obj.category = out.category;
                obj.mesh = sets[i].exemplars[ranked.index].mesh;
                obj.transform = ranked.pose.transform;
                obj.evidence = MaskEvidence::from(masks[i]);
                obj.interaction = out.interaction;
                state.objects.push_back(std::move(obj));
            }
            OptimizeResult r = optimize_scene(std::move(state), priors, config);
            const double total = r.trace.empty() ? std::numeric_limits<double>::quiet_NaN() : r.trace.back().total;
            const double best_total = best ? result.optimized.trace.back().total : 0.0;
            if (std::isfinite(total) && (!best || total < best_total)) {
                best = c;
                result.optimized = std::move(r);
            }
        }
        if (!best) fail(ErrorKind::OptimizationFailure, "no exemplar candidate reached a finite loss");
        for (auto& o : result.objects) o.chosen = std::min(*best, o.ranked.size() - 1);
        for (const auto& w : result.optimized.warnings) result.warnings.push_back(w);
        if (result.optimized.aborted) result.warnings.push_back(result.optimized.diagnostic);
    });

    if (spec.ground_truth) {
        detail::run_stage("evaluate", [&] {
            ReconstructionFrame gt, pred;
            gt.human_vertices = read_obj(*spec.ground_truth / "human.obj").vertices;
            for (std::size_t i = 0; i < spec.objects.size(); ++i)
                gt.objects.push_back(read_obj(*spec.ground_truth / ("object_" + std::to_string(i) + ".obj")).vertices);
            const auto& state = result.optimized.state;
            pred.human_vertices = state.humans[0].world_vertices();
            for (const auto& o : state.objects) pred.objects.push_back(o.world_vertices());
            result.evaluation = evaluate_reconstruction(pred, gt);
        });
    }
    return result;
}

/// Scene image with the observed masks (blue), the optimized objects (red,
/// magenta where they overlap the mask) and the human (green).
inline RgbImage render_overlay(const SceneState& state) {
    const Camera& cam = state.camera;
    RgbImage img(cam.width, cam.height, 32);
    auto paint = [&](const BinaryImage& m, int channel, std::uint8_t value) {
        for (int y = 0; y < cam.height; ++y)
            for (int x = 0; x < cam.width; ++x)
                if (m.at(x, y)) img.at(x, y, channel) = value;
    };
    for (const auto& h : state.humans) paint(render_silhouette(h.world_vertices(), h.mesh.mesh.faces, cam), 1, 160);
    for (const auto& o : state.objects) paint(o.evidence.mask, 2, 220);
    for (const auto& o : state.objects) paint(render_silhouette(o.world_vertices(), o.mesh.mesh.faces, cam), 0, 230);
    return img;
}

inline nlohmann::json transform_json(const RigidSimTransform& t) {
    return {{"scale", t.scale},
            {"rotation", {t.rotation.x(), t.rotation.y(), t.rotation.z()}},
            {"translation", {t.translation.x(), t.translation.y(), t.translation.z()}}};
}

inline nlohmann::json breakdown_json(const LossBreakdown& b) {
    return {{"contact", b.contact},           {"normal", b.normal}, {"penetration", b.penetration},
            {"scale", b.scale},               {"reprojection", b.reprojection}, {"total", b.total}};
}

inline nlohmann::json pipeline_json(const PipelineResult& r) {
    const auto& state = r.optimized.state;
    const BodyParams& b = r.body;
    nlohmann::json j;
    j["action"] = r.action;
    j["action_source"] = r.action_overridden ? "override" : "retrieval";
    j["body"] = {{"betas", std::vector<double>(b.betas.data(), b.betas.data() + b.betas.size())},
                 {"pose", detail::pose_values(b)},
                 {"translation", {b.translation.x(), b.translation.y(), b.translation.z()}},
                 {"scale", state.humans.at(0).scale},
                 {"keypoint_energy", {r.body_energy.front(), r.body_energy.back()}}};
    j["objects"] = nlohmann::json::array();
    for (std::size_t i = 0; i < r.objects.size(); ++i) {
        const auto& o = r.objects[i];
        nlohmann::json pairs = nlohmann::json::array();
        for (const auto& p : o.interaction.pairs) pairs.push_back({p.object_part, p.body_part});
        nlohmann::json ranked = nlohmann::json::array();
        for (const auto& e : o.ranked) ranked.push_back({{"exemplar", e.index}, {"iou", e.iou}});
        nlohmann::json obj{{"category", o.category},
                           {"exemplar", o.ranked[o.chosen].index},
                           {"size_prior", o.size_prior},
                           {"contacts", pairs},
                           {"ranked", ranked},
                           {"transform", transform_json(state.objects[i].transform)}};
        if (o.retrieval)
            obj["retrieval"] = {{"action", o.retrieval->label.verb},
                                {"distance", o.retrieval->distance},
                                {"provenance", o.retrieval->provenance}};
        j["objects"].push_back(obj);
    }
    j["loss"] = {{"initial", breakdown_json(r.optimized.trace.front())},
                 {"final", breakdown_json(r.optimized.trace.back())}};
    j["warnings"] = r.warnings;
    if (r.evaluation) j["evaluation"] = {{"human_cm", r.evaluation->human_cm}, {"object_cm", r.evaluation->object_cm}};
    return j;
}

inline void write_trace_csv(const std::vector<LossBreakdown>& trace, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) fail(ErrorKind::Io, "cannot write " + path.string());
    out << std::setprecision(17) << "step,contact,normal,penetration,scale,reprojection,total\n";
    for (std::size_t i = 0; i < trace.size(); ++i) {
        const auto& b = trace[i];
        out << i << ',' << b.contact << ',' << b.normal << ',' << b.penetration << ',' << b.scale << ','
            << b.reprojection << ',' << b.total << '\n';
    }
}

/// Rebuilds the optimized scene from a scene file and the transforms.json
/// written for it.
inline SceneState restore_state(const SceneSpec& spec, const nlohmann::json& transforms) {
    const ArticulatedTestBody model;
    SceneState state;
    state.camera = spec.camera;
    try {
        const auto& b = transforms.at("body");
        BodyParams p;
        const auto betas = b.at("betas").get<std::vector<double>>();
        const auto pose = b.at("pose").get<std::vector<double>>();
        const auto trans = b.at("translation").get<std::vector<double>>();
        if (betas.size() != kShapeDims || pose.size() != kPoseDims || trans.size() != 3)
            throw SchemaError("body", "parameter sizes do not match the body model");
        p.betas = Eigen::Map<const ShapeVector>(betas.data());
        p.pose = Eigen::Map<const PoseVector>(pose.data());
        p.translation = Vec3(trans[0], trans[1], trans[2]);
        state.humans.push_back(make_human(model.evaluate(p), model));
        state.humans[0].scale = b.at("scale").get<double>();
        const auto& objects = transforms.at("objects");
        if (objects.size() != spec.objects.size()) throw SchemaError("objects", "object count differs from the scene file");
        for (std::size_t i = 0; i < objects.size(); ++i) {
            const ExemplarSet set = read_exemplar_set(spec.objects[i].exemplars);
            const auto index = objects[i].at("exemplar").get<std::size_t>();
            if (index >= set.exemplars.size())
                throw SchemaError("objects[" + std::to_string(i) + "].exemplar", "index outside the exemplar set");
            const auto& t = objects[i].at("transform");
            ObjectInstance obj;
            obj.category = spec.objects[i].category;
            obj.mesh = set.exemplars[index].mesh;
            obj.transform.scale = t.at("scale").get<double>();
            const auto r = t.at("rotation").get<std::vector<double>>();
            const auto x = t.at("translation").get<std::vector<double>>();
            if (r.size() != 3 || x.size() != 3)
                throw SchemaError("objects[" + std::to_string(i) + "].transform", "expected 3-vectors");
            obj.transform.rotation = Vec3(r[0], r[1], r[2]);
            obj.transform.translation = Vec3(x[0], x[1], x[2]);
            obj.evidence = MaskEvidence::from(read_png_mask(spec.objects[i].mask));
            state.objects.push_back(std::move(obj));
        }
    } catch (const nlohmann::json::exception& e) {
        throw SchemaError("transforms", e.what());
    }
    return state;
}

/// transforms.json, human.obj, object_N.obj (camera frame), trace.csv and
/// overlay.png under `dir`.
inline void write_pipeline_outputs(const PipelineResult& r, const std::filesystem::path& dir) {
    std::filesystem::create_directories(dir);
    {
        std::ofstream out(dir / "transforms.json");
        if (!out) fail(ErrorKind::Io, "cannot write " + (dir / "transforms.json").string());
        out << pipeline_json(r).dump(2) << '\n';
    }
    const auto& state = r.optimized.state;
    TriangleMesh human = state.humans[0].mesh.mesh;
    human.vertices = state.humans[0].world_vertices();
    write_obj(human, dir / "human.obj");
    for (std::size_t i = 0; i < state.objects.size(); ++i) {
        TriangleMesh m = state.objects[i].mesh.mesh;
        m.vertices = state.objects[i].world_vertices();
        write_obj(m, dir / ("object_" + std::to_string(i) + ".obj"));
    }
    write_trace_csv(r.optimized.trace, dir / "trace.csv");
    write_png_rgb(render_overlay(state), dir / "overlay.png");
}

}  // namespace hoi
