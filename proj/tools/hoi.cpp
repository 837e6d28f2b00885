// Command-line entry points: fit (full pipeline), retrieve, prior, cluster,
// eval and render. Exit codes: 0 success, 1 other error, 2 schema error,
// 3 stage failure.
#include "hoi/geometry/decimate.hpp"
#include "hoi/pipeline/pipeline.hpp"
#include "hoi/priors/live_client.hpp"

#include <CLI11.hpp>

#include <iostream>
#include <memory>

namespace {

using namespace hoi;

constexpr int kExitError = 1;
constexpr int kExitSchema = 2;
constexpr int kExitStage = 3;

/// Prompt cache plus the client that serves it. Offline runs never write
/// to the cache, so the shipped fixture stays frozen.
struct PriorSource {
    PriorSource(const std::filesystem::path& cache_path, bool allow_network)
        : cache(cache_path, allow_network) {
        LiveClientConfig config;
        config.allow_network = allow_network;
        client = std::make_unique<LiveClient>(config, cache);
    }
    PromptCache cache;
    std::unique_ptr<LiveClient> client;
};

std::filesystem::path default_cache() { return std::filesystem::path(HOI_DATA_DIR) / "priors" / "fixture_cache.jsonl"; }

struct FitArgs {
    std::vector<std::string> scenes;
    std::string out = "out";
    int steps = 500;
    double lr = 2e-3;
    LossWeights weights;
    std::string action;
    bool no_network = false;
    std::uint64_t seed = 0;
    unsigned jobs = 1;
    std::size_t candidates = 5;
};

int fit(const FitArgs& a) {
    PipelineOptions options;
    options.steps = a.steps;
    options.learning_rate = a.lr;
    options.weights = a.weights;
    options.candidates = a.candidates;
    if (!a.action.empty()) options.action = a.action;
    std::vector<SceneSpec> specs;
    for (const auto& s : a.scenes) specs.push_back(read_scene(s));
    // Scenes run in parallel; each pipeline runs its own stages sequentially.
    options.init.jobs = a.scenes.size() > 1 ? 1 : a.jobs;
    std::vector<int> codes(specs.size(), 0);
    std::vector<std::string> messages(specs.size());
    parallel_for(specs.size(), [&](std::size_t i) {
        const std::filesystem::path out =
            specs.size() == 1 ? std::filesystem::path(a.out) : std::filesystem::path(a.out) / specs[i].source.parent_path().filename();
        try {
            PriorSource priors(specs[i].prior_cache, !a.no_network);
            const PipelineResult r = run_pipeline(specs[i], *priors.client, options);
            write_pipeline_outputs(r, out);
            std::ostringstream msg;
            msg << std::setprecision(6) << specs[i].source.string() << ": action " << r.action << ", total loss "
                << r.optimized.trace.front().total << " -> " << r.optimized.trace.back().total;
            if (r.evaluation) msg << ", human " << r.evaluation->human_cm << " cm, object " << r.evaluation->object_cm << " cm";
            for (const auto& w : r.warnings) msg << "\n  warning: " << w;
            messages[i] = msg.str();
        } catch (const StageFailure& e) {
            codes[i] = kExitStage;
            messages[i] = specs[i].source.string() + ": " + e.what();
        } catch (const std::exception& e) {
            codes[i] = kExitError;
            messages[i] = specs[i].source.string() + ": " + e.what();
        }
    }, a.jobs);
    int code = 0;
    for (std::size_t i = 0; i < specs.size(); ++i) {
        (codes[i] ? std::cerr : std::cout) << messages[i] << '\n';
        code = std::max(code, codes[i]);
    }
    return code;
}

int retrieve(const std::string& scene_path, const std::string& db_path) {
    const SceneSpec spec = read_scene(scene_path);
    const ArticulatedTestBody model;
    BodyParams body;
    try {
        body = refine_body(spec.body_init, model, spec.keypoints, spec.camera).params;
    } catch (const Error& e) {
        throw StageFailure("body", e);
    }
    try {
        const PoseDatabase db(read_pose_entries(db_path.empty() ? spec.pose_database : std::filesystem::path(db_path)));
        const std::vector<double> pose(body.pose.data(), body.pose.data() + body.pose.size());
        for (const auto& o : spec.objects) {
            const RetrievalResult r = db.retrieve(pose, o.category);
            std::cout << o.category << ": " << r.label.verb << " (distance " << r.distance << ", provenance "
                      << r.provenance << ")\n";
        }
    } catch (const Error& e) {
        throw StageFailure("retrieve", e);
    }
    return 0;
}

int prior(const std::string& category, const std::string& action, const std::string& cache, bool no_network) {
    PriorSource source(cache.empty() ? default_cache() : std::filesystem::path(cache), !no_network);
    try {
        std::cout << category << ": " << query_object_size(category, *source.client).size << " m\n";
        if (!action.empty()) {
            const InteractionMap map = query_contacts(action, category, *source.client);
            for (const auto& p : map.pairs) std::cout << "  " << p.object_part << " / " << p.body_part << '\n';
        }
    } catch (const Error& e) {
        throw StageFailure("priors", e);
    }
    return 0;
}

int cluster(const std::string& category, const std::string& meshes_dir, int k, std::uint64_t seed,
            const std::string& out, unsigned jobs) {
    std::vector<std::filesystem::path> paths;
    for (const auto& entry : std::filesystem::directory_iterator(meshes_dir)) {
        const auto ext = detail::lower_extension(entry.path());
        if (ext == ".obj" || ext == ".ply") paths.push_back(entry.path());
    }
    std::sort(paths.begin(), paths.end());
    if (paths.empty()) throw SchemaError("--meshes", "no .obj or .ply meshes in " + meshes_dir);
    std::vector<PartLabeledMesh> meshes(paths.size());
    parallel_for(paths.size(), [&](std::size_t i) { meshes[i] = canonicalize_mesh(read_labeled_mesh(paths[i])); }, jobs);
    const ExemplarSet set = select_representatives(category, meshes, k, seed, jobs);
    write_exemplar_set(set, out);
    for (const auto& e : set.exemplars) std::cout << paths[e.source_index].filename().string() << '\n';
    return 0;
}

ReconstructionFrame read_frame(const std::filesystem::path& dir) {
    ReconstructionFrame f;
    f.id = dir.filename().string();
    f.human_vertices = read_obj(dir / "human.obj").vertices;
    for (int i = 0; std::filesystem::exists(dir / ("object_" + std::to_string(i) + ".obj")); ++i)
        f.objects.push_back(read_obj(dir / ("object_" + std::to_string(i) + ".obj")).vertices);
    return f;
}

int eval(const std::vector<std::string>& preds, const std::vector<std::string>& gts, const std::string& action,
         const std::string& out, bool one_way) {
    if (preds.size() != gts.size()) throw SchemaError("--gt", "one ground-truth directory per prediction");
    std::vector<ReconstructionFrame> frames;
    std::vector<ReconstructionError> errors;
    for (std::size_t i = 0; i < preds.size(); ++i) {
        ReconstructionFrame pred = read_frame(preds[i]);
        pred.action = action;
        errors.push_back(evaluate_reconstruction(pred, read_frame(gts[i]), ChamferMode::Distance, !one_way));
        std::cout << pred.id << ": human " << errors.back().human_cm << " cm, object " << errors.back().object_cm
                  << " cm\n";
        frames.push_back(std::move(pred));
    }
    if (!out.empty()) write_evaluation_report(out, frames, errors, !one_way);
    return 0;
}

int render(const std::string& scene_path, const std::string& transforms_path, const std::string& out) {
    const SceneSpec spec = read_scene(scene_path);
    std::ifstream in(transforms_path);
    if (!in) fail(ErrorKind::Io, "cannot open " + transforms_path);
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(in);
    } catch (const nlohmann::json::exception& e) {
        throw SchemaError("transforms", e.what());
    }
    write_png_rgb(render_overlay(restore_state(spec, j)), out);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Human-object interaction reconstruction from a single image"};
    app.require_subcommand(1);

    FitArgs fa;
    auto* fit_cmd = app.add_subcommand("fit", "run the full pipeline on one or more scene files");
    fit_cmd->add_option("--scene", fa.scenes, "scene file (repeatable)")->required();
    fit_cmd->add_option("--out", fa.out, "output directory");
    fit_cmd->add_option("--steps", fa.steps, "joint optimization steps")->capture_default_str();
    fit_cmd->add_option("--lr", fa.lr, "joint optimization learning rate")->capture_default_str();
    fit_cmd->add_option("--lambda1", fa.weights.normal, "normal loss weight")->capture_default_str();
    fit_cmd->add_option("--lambda2", fa.weights.penetration, "penetration loss weight")->capture_default_str();
    fit_cmd->add_option("--lambda3", fa.weights.scale, "scale loss weight")->capture_default_str();
    fit_cmd->add_option("--lambda4", fa.weights.reprojection, "reprojection loss weight")->capture_default_str();
    fit_cmd->add_option("--contact-weight", fa.weights.contact, "contact loss weight (0 disables it)")->capture_default_str();
    fit_cmd->add_option("--action", fa.action, "skip retrieval and use this action");
    fit_cmd->add_flag("--no-network", fa.no_network, "serve priors from the prompt cache only");
    fit_cmd->add_option("--seed", fa.seed, "random seed (the fit itself draws no random numbers)");
    fit_cmd->add_option("--jobs", fa.jobs, "worker threads (0 = all cores)")->capture_default_str();
    fit_cmd->add_option("--candidates", fa.candidates, "ranked exemplars to optimize")->capture_default_str();

    std::string scene, db, category, action, cache, meshes, out, transforms;
    std::vector<std::string> preds, gts;
    bool no_network = false, one_way = false;
    int k = 20;
    std::uint64_t seed = 0;
    unsigned jobs = 0;

    auto* retrieve_cmd = app.add_subcommand("retrieve", "refine the body and retrieve the action");
    retrieve_cmd->add_option("--scene", scene, "scene file")->required();
    retrieve_cmd->add_option("--db", db, "pose database (defaults to the scene's)");

    auto* prior_cmd = app.add_subcommand("prior", "query the size prior and, with --action, the contact pairs");
    prior_cmd->add_option("--category", category, "object category")->required();
    prior_cmd->add_option("--action", action, "action verb");
    prior_cmd->add_option("--cache", cache, "prompt cache (JSON lines)");
    prior_cmd->add_flag("--no-network", no_network, "serve priors from the prompt cache only");

    auto* cluster_cmd = app.add_subcommand("cluster", "select exemplars from a directory of part-labeled meshes");
    cluster_cmd->add_option("--category", category, "object category")->required();
    cluster_cmd->add_option("--meshes", meshes, "directory of .obj/.ply meshes with .parts sidecars")->required();
    cluster_cmd->add_option("--k", k, "number of exemplars")->capture_default_str();
    cluster_cmd->add_option("--seed", seed, "k-means++ seed")->capture_default_str();
    cluster_cmd->add_option("--out", out, "exemplar-set directory")->required();
    cluster_cmd->add_option("--jobs", jobs, "worker threads (0 = all cores)");

    auto* eval_cmd = app.add_subcommand("eval", "Chamfer errors after Procrustes alignment of the human");
    eval_cmd->add_option("--pred", preds, "fit output directory (repeatable)")->required();
    eval_cmd->add_option("--gt", gts, "ground-truth directory with human.obj and object_N.obj (repeatable)")->required();
    eval_cmd->add_option("--action", action, "action label for the per-action table");
    eval_cmd->add_option("--out", out, "per-frame CSV report");
    eval_cmd->add_flag("--one-way", one_way, "prediction-to-ground-truth Chamfer instead of symmetric");

    auto* render_cmd = app.add_subcommand("render", "overlay image of a fitted scene");
    render_cmd->add_option("--scene", scene, "scene file")->required();
    render_cmd->add_option("--transforms", transforms, "transforms.json written by fit")->required();
    render_cmd->add_option("--out", out, "PNG path")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (*fit_cmd) return fit(fa);
        if (*retrieve_cmd) return retrieve(scene, db);
        if (*prior_cmd) return prior(category, action.empty() ? "" : action, cache, no_network);
        if (*cluster_cmd) return cluster(category, meshes, k, seed, out, jobs);
        if (*eval_cmd) return eval(preds, gts, action.empty() ? "unknown" : action, out, one_way);
        if (*render_cmd) return render(scene, transforms, out);
    } catch (const SchemaError& e) {
        std::cerr << "schema error: " << e.what() << '\n';
        return kExitSchema;
    } catch (const StageFailure& e) {
        std::cerr << e.what() << '\n';
        return kExitStage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitError;
    }
    return kExitError;
}
