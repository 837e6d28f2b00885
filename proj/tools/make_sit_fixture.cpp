// Writes the shipped "sit on chair" fixture: scene file, object mask, noisy
// body initialization with keypoints, a small pose database, a chair
// exemplar set and the ground-truth meshes used by evaluation.
#include "hoi/exemplars/exemplar_set.hpp"
#include "hoi/geometry/mesh_io.hpp"
#include "hoi/retrieval/pose_database.hpp"
#include "hoi/synthetic/sit_scene.hpp"

#include <nlohmann/json.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>

namespace {

using namespace hoi;

std::vector<double> pose_vector(const BodyParams& p) { return {p.pose.data(), p.pose.data() + p.pose.size()}; }

std::vector<PoseEntry> pose_database(std::mt19937_64& rng) {
    std::normal_distribution<double> jitter(0.0, 0.08);
    std::vector<PoseEntry> out;
    std::uint64_t id = 100;
    auto add = [&](BodyParams p, const std::string& verb, const std::string& category, double weight) {
        for (int j = 1; j < kJointCount; ++j)
            for (int k = 0; k < 3; ++k) p.pose[3 * j + k] += jitter(rng);
        out.push_back({pose_vector(p), {verb, category, weight}, id++});
    };
    for (int i = 0; i < 4; ++i) {
        BodyParams sit;
        for (int hip : {1, 2}) sit.pose.segment<3>(3 * hip) = Vec3(-1.5 - 0.05 * i, 0, 0);
        for (int knee : {4, 5}) sit.pose.segment<3>(3 * knee) = Vec3(1.4 + 0.05 * i, 0, 0);
        add(sit, "sit", "chair", 2.0);
        add(BodyParams{}, "stand on", "chair", 1.0);
        BodyParams carry;
        for (int shoulder : {16, 17}) carry.pose.segment<3>(3 * shoulder) = Vec3(-1.2, 0, 0);
        for (int elbow : {18, 19}) carry.pose.segment<3>(3 * elbow) = Vec3(-0.6, 0, 0);
        add(carry, "carry", "chair", 1.5);
        add(sit, "sit", "table", 1.0);
    }
    return out;
}

void write_json(const nlohmann::json& j, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) fail(ErrorKind::Io, "cannot write " + path.string());
    out << j.dump(2) << '\n';
}

}  // namespace

int main(int argc, char** argv) {
    if (argc != 2) {
        std::cerr << "usage: make_sit_fixture <out dir>\n";
        return 2;
    }
    try {
        const std::filesystem::path dir = argv[1];
        std::filesystem::create_directories(dir / "gt");
        std::mt19937_64 rng(20221003);
        const SyntheticScene scene = make_sit_scene();
        const ArticulatedTestBody model;
        const Camera& cam = scene.state.camera;

        write_png_mask(scene.state.objects[0].evidence.mask, dir / "mask.png");
        TriangleMesh human = scene.state.humans[0].mesh.mesh;
        write_obj(human, dir / "gt" / "human.obj");
        TriangleMesh chair = scene.state.objects[0].mesh.mesh;
        chair.vertices = scene.object_vertices;
        write_obj(chair, dir / "gt" / "object_0.obj");

        std::vector<PartLabeledMesh> meshes{scene.state.objects[0].mesh};
        for (int i = 0; i < 3; ++i) meshes.push_back(canonicalize_mesh(make_chair(random_chair_style(rng))));
        write_exemplar_set(select_representatives("chair", meshes, static_cast<int>(meshes.size()), 7), dir / "exemplars");

        write_pose_entries(pose_database(rng), dir / "poses.jsonl");

        // Keypoints are the projected true joints; the initialization is
        // the true pose with joint noise and a shifted root.
        std::normal_distribution<double> noise(0.0, 0.04);
        BodyParams init = scene.body;
        for (int j = 1; j < kJointCount; ++j)
            for (int k = 0; k < 3; ++k) init.pose[3 * j + k] += noise(rng);
        init.translation += Vec3(0.03, -0.02, 0.05);
        nlohmann::json points = nlohmann::json::array();
        for (const auto& p : model.joints(scene.body)) {
            const Vec2 uv = cam.project(p);
            points.push_back({uv.x(), uv.y()});
        }

        nlohmann::json j;
        j["camera"] = {{"fx", cam.fx}, {"fy", cam.fy}, {"cx", cam.cx}, {"cy", cam.cy}, {"width", cam.width}, {"height", cam.height}};
        j["body"] = {{"model", model.name()},
                     {"init", {{"betas", std::vector<double>(init.betas.data(), init.betas.data() + kShapeDims)},
                               {"pose", pose_vector(init)},
                               {"translation", {init.translation.x(), init.translation.y(), init.translation.z()}}}},
                     {"keypoints", {{"points", points}, {"confidence", std::vector<double>(kJointCount, 1.0)}}}};
        j["objects"] = {{{"category", "chair"}, {"mask", "mask.png"}, {"exemplars", "exemplars"}}};
        j["pose_database"] = "poses.jsonl";
        j["prior_cache"] = "../../priors/fixture_cache.jsonl";
        j["ground_truth"] = "gt";
        write_json(j, dir / "scene.json");
        std::cout << "wrote fixture to " << dir << '\n';
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}
