#pragma once

#include "hoi/exemplars/exemplar_set.hpp"
#include "hoi/parallel.hpp"
#include "hoi/scene/init_pose.hpp"

#include <algorithm>
#include <utility>
#include <vector>

namespace hoi {

struct RankedExemplar {
    std::size_t index = 0;  // into ExemplarSet::exemplars
    double iou = 0.0;
    InitPoseResult pose;
};

/// Highest IoU first; equal scores keep their input order. Keeps top_n.
inline std::vector<RankedExemplar> order_by_iou(std::vector<RankedExemplar> ranked, std::size_t top_n) {
    std::stable_sort(ranked.begin(), ranked.end(),
                     [](const RankedExemplar& a, const RankedExemplar& b) { return a.iou > b.iou; });
    ranked.resize(std::min(top_n, ranked.size()));
    return ranked;
}

/// Initializes every exemplar against the mask and orders them by
/// silhouette IoU, highest first; equal scores keep exemplar order.
inline std::vector<RankedExemplar> rank_exemplars(const ExemplarSet& set, const BinaryImage& mask, const Camera& camera,
                                                  double intrinsic_scale, std::size_t top_n = 5,
                                                  InitPoseConfig config = {}) {
    if (mask.count() == 0) fail(ErrorKind::InvalidInput, "object mask is empty");
    require(!set.exemplars.empty(), "exemplar set is empty");
    std::vector<RankedExemplar> all(set.exemplars.size());
    const unsigned jobs = config.jobs;
    config.jobs = 1;
    parallel_for(all.size(), [&](std::size_t i) {
        all[i].index = i;
        all[i].pose = init_object_pose(set.exemplars[i].mesh, mask, camera, intrinsic_scale, config);
        all[i].iou = all[i].pose.iou;
    }, jobs);
    return order_by_iou(std::move(all), top_n);
}

}  // namespace hoi
