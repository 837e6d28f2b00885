#pragma once

#include "hoi/geometry/kdtree.hpp"

#include <cmath>
#include <vector>

namespace hoi {

enum class ChamferMode { Distance, SquaredDistance };

struct ChamferResult {
    double value = 0.0;
    std::vector<std::size_t> nearest;  // per src point, index into dst
};

/// Mean over `src` of the distance to the nearest `dst` point.
inline ChamferResult one_way_chamfer_detailed(const Points3& src, const KdTree& dst_index,
                                              ChamferMode mode = ChamferMode::Distance) {
    require(!src.empty(), "chamfer source set is empty");
    require(!dst_index.empty(), "chamfer target set is empty");
    ChamferResult r;
    r.nearest.resize(src.size());
    double sum = 0.0;
    for (std::size_t i = 0; i < src.size(); ++i) {
        const auto hit = dst_index.nearest(src[i]);
        r.nearest[i] = hit.index;
        sum += mode == ChamferMode::Distance ? std::sqrt(hit.distance_sq) : hit.distance_sq;
    }
    r.value = sum / static_cast<double>(src.size());
    return r;
}

inline double one_way_chamfer(const Points3& src, const Points3& dst, ChamferMode mode = ChamferMode::Distance) {
    require(!dst.empty(), "chamfer target set is empty");
    return one_way_chamfer_detailed(src, KdTree::from_points(dst), mode).value;
}

/// Mean of both one-way terms.
inline double symmetric_chamfer(const Points3& a, const Points3& b, ChamferMode mode = ChamferMode::Distance) {
    return 0.5 * (one_way_chamfer(a, b, mode) + one_way_chamfer(b, a, mode));
}

}  // namespace hoi
