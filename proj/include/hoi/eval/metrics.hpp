#pragma once

#include "hoi/geometry/chamfer.hpp"
#include "hoi/geometry/procrustes.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <string>
#include <vector>

namespace hoi {

/// Reconstructed (or ground-truth) scene as point sets in one frame.
struct ReconstructionFrame {
    std::string id;
    std::string action;
    Points3 human_vertices;
    Points3 human_joints;  // alignment fallback when vertex counts differ
    std::vector<Points3> objects;
};

struct ReconstructionError {
    double human_cm = 0.0;
    double object_cm = 0.0;  // mean over objects
    std::vector<double> per_object_cm;
    RigidSimTransform alignment;  // prediction -> ground truth
    bool aligned_on_joints = false;
};

/// Procrustes-aligns the predicted human to the ground truth, applies the
/// same similarity to the predicted objects, and reports Chamfer distances
/// in centimetres (symmetric by default, or prediction -> ground truth).
inline ReconstructionError evaluate_reconstruction(const ReconstructionFrame& pred, const ReconstructionFrame& gt,
                                                   ChamferMode mode = ChamferMode::Distance, bool symmetric = true) {
    if (pred.objects.size() != gt.objects.size())
        fail(ErrorKind::InvalidInput, "prediction has " + std::to_string(pred.objects.size()) +
                                          " objects, ground truth has " + std::to_string(gt.objects.size()));
    if (pred.human_vertices.empty() || gt.human_vertices.empty())
        fail(ErrorKind::InvalidInput, "human vertices missing");
    ReconstructionError e;
    if (pred.human_vertices.size() == gt.human_vertices.size()) {
        e.alignment = procrustes_align(pred.human_vertices, gt.human_vertices);
    } else {
        if (pred.human_joints.size() != gt.human_joints.size() || pred.human_joints.empty())
            fail(ErrorKind::InvalidInput, "human vertex counts differ and no matching joints to align on");
        e.alignment = procrustes_align(pred.human_joints, gt.human_joints);
        e.aligned_on_joints = true;
    }
    auto distance = [&](const Points3& a, const Points3& b) {
        return 100.0 * (symmetric ? symmetric_chamfer(a, b, mode) : one_way_chamfer(a, b, mode));
    };
    e.human_cm = distance(e.alignment.apply(pred.human_vertices), gt.human_vertices);
    for (std::size_t o = 0; o < pred.objects.size(); ++o)
        e.per_object_cm.push_back(distance(e.alignment.apply(pred.objects[o]), gt.objects[o]));
    double sum = 0.0;
    for (double d : e.per_object_cm) sum += d;
    e.object_cm = e.per_object_cm.empty() ? 0.0 : sum / static_cast<double>(e.per_object_cm.size());
    return e;
}

struct ActionAggregate {
    std::size_t frames = 0;
    double human_mean = 0.0, human_std = 0.0;
    double object_mean = 0.0, object_std = 0.0;
};

/// Mean and population standard deviation per action label.
inline std::map<std::string, ActionAggregate> aggregate_by_action(const std::vector<std::string>& actions,
                                                                  const std::vector<ReconstructionError>& errors) {
    require(actions.size() == errors.size(), "one action label per frame");
    std::map<std::string, std::vector<const ReconstructionError*>> groups;
    for (std::size_t i = 0; i < actions.size(); ++i) groups[actions[i]].push_back(&errors[i]);
    std::map<std::string, ActionAggregate> out;
    for (const auto& [action, list] : groups) {
        ActionAggregate a;
        a.frames = list.size();
        const double n = static_cast<double>(list.size());
        for (auto* e : list) {
            a.human_mean += e->human_cm / n;
            a.object_mean += e->object_cm / n;
        }
        for (auto* e : list) {
            a.human_std += (e->human_cm - a.human_mean) * (e->human_cm - a.human_mean) / n;
            a.object_std += (e->object_cm - a.object_mean) * (e->object_cm - a.object_mean) / n;
        }
        a.human_std = std::sqrt(a.human_std);
        a.object_std = std::sqrt(a.object_std);
        out[action] = a;
    }
    return out;
}

/// Per-frame CSV plus a per-action table next to it (`<stem>_by_action.csv`).
inline void write_evaluation_report(const std::filesystem::path& csv, const std::vector<ReconstructionFrame>& frames,
                                    const std::vector<ReconstructionError>& errors, bool symmetric = true) {
    require(frames.size() == errors.size(), "one error per frame");
    if (csv.has_parent_path()) std::filesystem::create_directories(csv.parent_path());
    const std::string metric = symmetric ? "symmetric" : "one-way";
    {
        std::ofstream out(csv);
        if (!out) fail(ErrorKind::Io, "cannot write " + csv.string());
        out << "# chamfer: " << metric << ", centimetres, after Procrustes alignment of the human\n";
        out << "frame,action,human_cm,object_cm\n";
        for (std::size_t i = 0; i < frames.size(); ++i)
            out << frames[i].id << ',' << frames[i].action << ',' << errors[i].human_cm << ',' << errors[i].object_cm << '\n';
    }
    std::vector<std::string> actions;
    for (const auto& f : frames) actions.push_back(f.action);
    const auto path = csv.parent_path() / (csv.stem().string() + "_by_action.csv");
    std::ofstream out(path);
    if (!out) fail(ErrorKind::Io, "cannot write " + path.string());
    out << "# chamfer: " << metric << ", centimetres\n";
    out << "action,frames,human_mean,human_std,object_mean,object_std\n";
    for (const auto& [action, a] : aggregate_by_action(actions, errors))
        out << action << ',' << a.frames << ',' << a.human_mean << ',' << a.human_std << ',' << a.object_mean << ','
            << a.object_std << '\n';
}

}  // namespace hoi
