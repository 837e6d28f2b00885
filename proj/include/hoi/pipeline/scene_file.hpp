#pragma once

#include "hoi/body/params.hpp"
#include "hoi/camera.hpp"

#include <nlohmann/json.hpp>

#include <filesystem>
#include <fstream>
#include <optional>
#include <string>
#include <vector>

namespace hoi {

/// Scene file that does not match the schema; `field` is a JSON path such as
/// "objects[0].mask".
class SchemaError : public Error {
public:
    SchemaError(std::string field, const std::string& message)
        : Error(ErrorKind::InvalidInput, field + ": " + message), field(std::move(field)) {}
    std::string field;
};

struct SceneObjectSpec {
    std::string category;
    std::filesystem::path mask;
    std::filesystem::path exemplars;  // exemplar-set directory
};

/// Parsed scene file. Relative paths are resolved against the file's
/// directory.
struct SceneSpec {
    std::filesystem::path source;
    Camera camera;
    std::string body_model = "articulated-test-body";
    BodyParams body_init;
    Keypoints2D keypoints;
    std::vector<SceneObjectSpec> objects;
    std::filesystem::path pose_database;
    std::filesystem::path prior_cache;
    std::optional<std::filesystem::path> ground_truth;  // directory with human.obj, object_N.obj
};

namespace detail {

inline const nlohmann::json& field(const nlohmann::json& j, const std::string& key, const std::string& path) {
    if (!j.is_object()) throw SchemaError(path, "expected an object");
    auto it = j.find(key);
    if (it == j.end()) throw SchemaError(path.empty() ? key : path + "." + key, "missing required field");
    return *it;
}

inline std::string join_path(const std::string& path, const std::string& key) { return path.empty() ? key : path + "." + key; }

inline double number(const nlohmann::json& j, const std::string& key, const std::string& path) {
    const auto& v = field(j, key, path);
    if (!v.is_number()) throw SchemaError(join_path(path, key), "expected a number");
    return v.get<double>();
}

inline std::string text(const nlohmann::json& j, const std::string& key, const std::string& path) {
    const auto& v = field(j, key, path);
    if (!v.is_string() || v.get<std::string>().empty()) throw SchemaError(join_path(path, key), "expected a non-empty string");
    return v.get<std::string>();
}

inline std::vector<double> numbers(const nlohmann::json& j, const std::string& key, const std::string& path,
                                   std::size_t count) {
    const auto& v = field(j, key, path);
    const std::string where = join_path(path, key);
    if (!v.is_array() || v.size() != count)
        throw SchemaError(where, "expected an array of " + std::to_string(count) + " numbers");
    std::vector<double> out;
    for (const auto& x : v) {
        if (!x.is_number()) throw SchemaError(where, "expected an array of " + std::to_string(count) + " numbers");
        out.push_back(x.get<double>());
    }
    return out;
}

inline std::filesystem::path existing_path(const nlohmann::json& j, const std::string& key, const std::string& path,
                                           const std::filesystem::path& base) {
    std::filesystem::path p = text(j, key, path);
    if (p.is_relative()) p = base / p;
    if (!std::filesystem::exists(p)) throw SchemaError(join_path(path, key), "path does not exist: " + p.string());
    return p;
}

}  // namespace detail

inline SceneSpec parse_scene(const nlohmann::json& j, const std::filesystem::path& base) {
    using namespace detail;
    SceneSpec s;
    const auto& cam = field(j, "camera", "");
    s.camera.fx = number(cam, "fx", "camera");
    s.camera.fy = number(cam, "fy", "camera");
    s.camera.cx = number(cam, "cx", "camera");
    s.camera.cy = number(cam, "cy", "camera");
    s.camera.width = static_cast<int>(number(cam, "width", "camera"));
    s.camera.height = static_cast<int>(number(cam, "height", "camera"));
    if (!(s.camera.fx > 0 && s.camera.fy > 0)) throw SchemaError("camera", "focal lengths must be positive");
    if (s.camera.width <= 0 || s.camera.height <= 0) throw SchemaError("camera", "image size must be positive");

    const auto& body = field(j, "body", "");
    if (body.contains("model")) s.body_model = text(body, "model", "body");
    if (s.body_model != "articulated-test-body")
        throw SchemaError("body.model", "unknown body model \"" + s.body_model + "\"");
    const auto& init = field(body, "init", "body");
    const auto betas = numbers(init, "betas", "body.init", kShapeDims);
    const auto pose = numbers(init, "pose", "body.init", kPoseDims);
    const auto trans = numbers(init, "translation", "body.init", 3);
    s.body_init.betas = Eigen::Map<const ShapeVector>(betas.data());
    s.body_init.pose = Eigen::Map<const PoseVector>(pose.data());
    s.body_init.translation = Vec3(trans[0], trans[1], trans[2]);

    const auto& kp = field(body, "keypoints", "body");
    const auto& points = field(kp, "points", "body.keypoints");
    const auto& conf = field(kp, "confidence", "body.keypoints");
    if (!points.is_array() || points.size() != kJointCount)
        throw SchemaError("body.keypoints.points", "expected " + std::to_string(kJointCount) + " [x, y] pairs");
    if (!conf.is_array() || conf.size() != kJointCount)
        throw SchemaError("body.keypoints.confidence", "expected " + std::to_string(kJointCount) + " numbers");
    for (std::size_t i = 0; i < points.size(); ++i) {
        const auto& p = points[i];
        if (!p.is_array() || p.size() != 2 || !p[0].is_number() || !p[1].is_number())
            throw SchemaError("body.keypoints.points[" + std::to_string(i) + "]", "expected [x, y]");
        if (!conf[i].is_number() || conf[i].get<double>() < 0.0)
            throw SchemaError("body.keypoints.confidence[" + std::to_string(i) + "]", "expected a non-negative number");
        s.keypoints.points.emplace_back(p[0].get<double>(), p[1].get<double>());
        s.keypoints.confidence.push_back(conf[i].get<double>());
    }

    const auto& objects = field(j, "objects", "");
    if (!objects.is_array() || objects.empty()) throw SchemaError("objects", "expected a non-empty array");
    for (std::size_t i = 0; i < objects.size(); ++i) {
        const std::string path = "objects[" + std::to_string(i) + "]";
        SceneObjectSpec o;
        o.category = text(objects[i], "category", path);
        o.mask = existing_path(objects[i], "mask", path, base);
        o.exemplars = existing_path(objects[i], "exemplars", path, base);
        s.objects.push_back(std::move(o));
    }
    s.pose_database = existing_path(j, "pose_database", "", base);
    s.prior_cache = existing_path(j, "prior_cache", "", base);
    if (j.contains("ground_truth")) s.ground_truth = existing_path(j, "ground_truth", "", base);
    return s;
}

inline SceneSpec read_scene(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) fail(ErrorKind::Io, "cannot open scene file " + path.string());
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(in);
    } catch (const nlohmann::json::exception& e) {
        throw SchemaError("$", std::string("not valid JSON: ") + e.what());
    }
    SceneSpec s = parse_scene(j, path.parent_path());
    s.source = path;
    return s;
}

}  // namespace hoi
