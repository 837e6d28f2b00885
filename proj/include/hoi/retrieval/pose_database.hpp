#pragma once

#include "hoi/body/params.hpp"
#include "hoi/geometry/kdtree.hpp"
#include "hoi/geometry/transform.hpp"

#include <nlohmann/json.hpp>

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace hoi {

struct ActionLabel {
    std::string verb;
    std::string object_category;
    double weight = 1.0;  // concept weight of the (verb, category) relation
};

struct PoseEntry {
    std::vector<double> pose;  // 72 axis-angle values, root first
    ActionLabel label;
    std::uint64_t provenance = 0;
};

struct RetrievalOptions {
    bool include_root = false;  // compare the global orientation too
    bool geodesic = false;      // per-joint rotation angle instead of raw axis-angle difference
};

struct RetrievalResult {
    ActionLabel label;
    double distance = 0.0;
    std::size_t entry = 0;
    std::uint64_t provenance = 0;
};

/// Immutable pose collection with exact nearest-neighbour lookup. Ties on
/// distance go to the lowest provenance id.
class PoseDatabase {
public:
    PoseDatabase() = default;

    explicit PoseDatabase(std::vector<PoseEntry> entries, RetrievalOptions options = {})
        : entries_(std::move(entries)), options_(options) {
        require(!entries_.empty(), "pose database needs at least one entry");
        const std::size_t dim = entries_.front().pose.size();
        for (const auto& e : entries_) {
            require(e.pose.size() == dim, "pose dimension mismatch in database");
            require(!e.label.verb.empty(), "database entry without an action label");
            require(e.label.weight >= 1.0, "admitted actions need concept weight >= 1");
            for (double v : e.pose) require(std::isfinite(v), "non-finite pose value in database");
        }
        require(dim == static_cast<std::size_t>(kPoseDims), "pose vectors must have 72 values");
        if (options_.geodesic) return;
        std::map<std::string, std::vector<std::size_t>> by_category;
        for (std::size_t i = 0; i < entries_.size(); ++i) by_category[entries_[i].label.object_category].push_back(i);
        all_ = make_index(all_members());
        for (auto& [category, members] : by_category) per_category_.emplace(category, make_index(std::move(members)));
    }

    std::size_t size() const { return entries_.size(); }
    const std::vector<PoseEntry>& entries() const { return entries_; }
    const RetrievalOptions& options() const { return options_; }

    RetrievalResult retrieve(const std::vector<double>& query,
                             const std::optional<std::string>& category = std::nullopt) const {
        require(query.size() == static_cast<std::size_t>(kPoseDims), "query pose must have 72 values");
        if (options_.geodesic) return retrieve_geodesic(query, category);
        const Index* index = &all_;
        if (category) {
            auto it = per_category_.find(*category);
            if (it == per_category_.end()) fail(ErrorKind::NoCandidate, "no database entry for category " + *category);
            index = &it->second;
        }
        const std::vector<double> f = features(query);
        const auto hit = index->tree.nearest(f);
        return result_for(index->members[hit.index], std::sqrt(hit.distance_sq));
    }

    /// Linear-scan reference with the same metric and tie rule.
    RetrievalResult retrieve_linear(const std::vector<double>& query,
                                    const std::optional<std::string>& category = std::nullopt) const {
        require(query.size() == static_cast<std::size_t>(kPoseDims), "query pose must have 72 values");
        std::optional<std::size_t> best;
        double best_d = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < entries_.size(); ++i) {
            if (category && entries_[i].label.object_category != *category) continue;
            const double d = squared_distance(entries_[i].pose, query);
            if (!best || d < best_d || (d == best_d && entries_[i].provenance < entries_[*best].provenance)) {
                best = i;
                best_d = d;
            }
        }
        if (!best) fail(ErrorKind::NoCandidate, "no database entry for category " + category.value_or(""));
        return result_for(*best, std::sqrt(best_d));
    }

    double distance(const std::vector<double>& a, const std::vector<double>& b) const {
        return std::sqrt(squared_distance(a, b));
    }

    /// Same summation order as the k-d tree, so scan and tree agree exactly.
    double squared_distance(const std::vector<double>& a, const std::vector<double>& b) const {
        const int first = options_.include_root ? 0 : 1;
        double s = 0.0;
        for (int j = first; j < kJointCount; ++j) {
            if (options_.geodesic) {
                const Vec3 ra(a[3 * j], a[3 * j + 1], a[3 * j + 2]), rb(b[3 * j], b[3 * j + 1], b[3 * j + 2]);
                const double angle = rotation_angle_between(rotation_from_axis_angle(ra), rotation_from_axis_angle(rb));
                s += angle * angle;
            } else {
                for (int k = 3 * j; k < 3 * j + 3; ++k) {
                    const double diff = b[k] - a[k];
                    s += diff * diff;
                }
            }
        }
        return s;
    }

private:
    struct Index {
        KdTree tree;
        std::vector<std::size_t> members;
    };

    std::vector<std::size_t> all_members() const {
        std::vector<std::size_t> m(entries_.size());
        for (std::size_t i = 0; i < m.size(); ++i) m[i] = i;
        return m;
    }

    std::vector<double> features(const std::vector<double>& pose) const {
        const std::size_t skip = options_.include_root ? 0 : 3;
        return {pose.begin() + static_cast<std::ptrdiff_t>(skip), pose.end()};
    }

    Index make_index(std::vector<std::size_t> members) const {
        std::vector<double> coords;
        std::vector<std::uint64_t> keys;
        for (auto i : members) {
            const auto f = features(entries_[i].pose);
            coords.insert(coords.end(), f.begin(), f.end());
            keys.push_back(entries_[i].provenance);
        }
        const std::size_t dim = options_.include_root ? kPoseDims : kPoseDims - 3;
        return {KdTree(std::move(coords), dim, std::move(keys)), std::move(members)};
    }

    RetrievalResult retrieve_geodesic(const std::vector<double>& query, const std::optional<std::string>& category) const {
        return retrieve_linear(query, category);
    }

    RetrievalResult result_for(std::size_t i, double d) const { return {entries_[i].label, d, i, entries_[i].provenance}; }

    std::vector<PoseEntry> entries_;
    RetrievalOptions options_;
    Index all_;
    std::map<std::string, Index> per_category_;
};

inline PoseDatabase build_pose_index(std::vector<PoseEntry> entries, RetrievalOptions options = {}) {
    return PoseDatabase(std::move(entries), options);
}

/// One JSON object per line: {"pose": [...72], "action": "...",
/// "category": "...", "provenance": N, "weight": w}.
inline std::vector<PoseEntry> read_pose_entries(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) fail(ErrorKind::Io, "cannot open pose database " + path.string());
    std::vector<PoseEntry> out;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        const std::string where = path.string() + ":" + std::to_string(line_no);
        nlohmann::json j;
        try {
            j = nlohmann::json::parse(line);
            PoseEntry e;
            e.pose = j.at("pose").get<std::vector<double>>();
            e.label.verb = j.at("action").get<std::string>();
            e.label.object_category = j.at("category").get<std::string>();
            e.label.weight = j.value("weight", 1.0);
            e.provenance = j.at("provenance").get<std::uint64_t>();
            if (e.pose.size() != static_cast<std::size_t>(kPoseDims))
                fail(ErrorKind::InvalidInput, where + ": pose must have 72 values");
            out.push_back(std::move(e));
        } catch (const nlohmann::json::exception& ex) {
            fail(ErrorKind::InvalidInput, where + ": " + ex.what());
        }
    }
    return out;
}

inline void write_pose_entries(const std::vector<PoseEntry>& entries, const std::filesystem::path& path) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path);
    if (!out) fail(ErrorKind::Io, "cannot write " + path.string());
    for (const auto& e : entries) {
        nlohmann::json j{{"pose", e.pose},
                         {"action", e.label.verb},
                         {"category", e.label.object_category},
                         {"provenance", e.provenance},
                         {"weight", e.label.weight}};
        out << j.dump() << '\n';
    }
}

}  // namespace hoi
