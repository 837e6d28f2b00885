#pragma once

#include "hoi/common.hpp"

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <span>
#include <vector>

namespace hoi {

/// Exact nearest-neighbour k-d tree over points of a runtime dimension.
///
/// Ties on distance resolve to the point with the smallest tie key (the
/// point index unless explicit keys are given), so queries agree bit for bit
/// with a linear scan that uses the same rule.
class KdTree {
public:
    struct Hit {
        std::size_t index = 0;
        double distance_sq = std::numeric_limits<double>::infinity();
    };

    KdTree() = default;

    KdTree(std::vector<double> coords, std::size_t dim, std::vector<std::uint64_t> tie_keys = {})
        : coords_(std::move(coords)), dim_(dim), keys_(std::move(tie_keys)) {
        require(dim_ > 0, "k-d tree dimension must be positive");
        require(coords_.size() % dim_ == 0, "coordinate buffer is not a multiple of the dimension");
        const std::size_t n = coords_.size() / dim_;
        if (keys_.empty()) {
            keys_.resize(n);
            std::iota(keys_.begin(), keys_.end(), 0);
        }
        require(keys_.size() == n, "tie key count mismatch");
        order_.resize(n);
        std::iota(order_.begin(), order_.end(), 0);
        nodes_.reserve(2 * n / kLeafSize + 2);
        if (n > 0) build(0, n, 0);
    }

    static KdTree from_points(const Points3& pts) {
        std::vector<double> c;
        c.reserve(pts.size() * 3);
        for (const auto& p : pts) c.insert(c.end(), {p.x(), p.y(), p.z()});
        return KdTree(std::move(c), 3);
    }

    static KdTree from_points(const Points2& pts) {
        std::vector<double> c;
        c.reserve(pts.size() * 2);
        for (const auto& p : pts) c.insert(c.end(), {p.x(), p.y()});
        return KdTree(std::move(c), 2);
    }

    std::size_t size() const { return order_.size(); }
    std::size_t dimension() const { return dim_; }
    bool empty() const { return order_.empty(); }

    std::span<const double> point(std::size_t i) const { return {coords_.data() + i * dim_, dim_}; }

    Hit nearest(std::span<const double> query) const {
        require(query.size() == dim_, "query dimension mismatch");
        require(!empty(), "nearest-neighbour query on an empty tree");
        Hit best;
        search(0, query, best);
        return best;
    }

    Hit nearest(const Vec3& q) const { return nearest(std::span<const double>(q.data(), 3)); }
    Hit nearest(const Vec2& q) const { return nearest(std::span<const double>(q.data(), 2)); }

    /// Reference scan with the same distance and tie rule as the tree.
    Hit nearest_linear(std::span<const double> query) const {
        require(query.size() == dim_, "query dimension mismatch");
        Hit best;
        for (std::size_t i = 0; i < size(); ++i) consider(i, query, best);
        return best;
    }

private:
    static constexpr std::size_t kLeafSize = 8;

    struct Node {
        std::size_t begin = 0, end = 0;
        std::size_t axis = 0;
        double split = 0.0;
        std::int64_t left = -1, right = -1;
    };

    double squared_distance(std::size_t i, std::span<const double> q) const {
        const double* p = coords_.data() + i * dim_;
        double s = 0.0;
        for (std::size_t d = 0; d < dim_; ++d) {
            const double diff = p[d] - q[d];
            s += diff * diff;
        }
        return s;
    }

    void consider(std::size_t i, std::span<const double> q, Hit& best) const {
        const double d = squared_distance(i, q);
        if (d < best.distance_sq || (d == best.distance_sq && keys_[i] < keys_[best.index])) {
            best.distance_sq = d;
            best.index = i;
        }
    }

    std::int64_t build(std::size_t begin, std::size_t end, int depth) {
        const auto id = static_cast<std::int64_t>(nodes_.size());
        nodes_.push_back({begin, end});
        if (end - begin <= kLeafSize) return id;

        // Split on the axis of largest spread.
        std::size_t axis = 0;
        double best_spread = -1.0;
        for (std::size_t d = 0; d < dim_; ++d) {
            double lo = std::numeric_limits<double>::infinity(), hi = -lo;
            for (std::size_t k = begin; k < end; ++k) {
                const double v = coords_[order_[k] * dim_ + d];
                lo = std::min(lo, v);
                hi = std::max(hi, v);
            }
            if (hi - lo > best_spread) {
                best_spread = hi - lo;
                axis = d;
            }
        }
        if (best_spread <= 0.0) return id;  // all points identical: keep as leaf

        const std::size_t mid = begin + (end - begin) / 2;
        std::nth_element(order_.begin() + begin, order_.begin() + mid, order_.begin() + end,
                         [&](std::size_t a, std::size_t b) {
                             return coords_[a * dim_ + axis] < coords_[b * dim_ + axis];
                         });
        nodes_[id].axis = axis;
        nodes_[id].split = coords_[order_[mid] * dim_ + axis];
        const auto left = build(begin, mid, depth + 1);
        const auto right = build(mid, end, depth + 1);
        nodes_[id].left = left;
        nodes_[id].right = right;
        return id;
    }

    void search(std::int64_t id, std::span<const double> q, Hit& best) const {
        const Node& node = nodes_[id];
        if (node.left < 0) {
            for (std::size_t k = node.begin; k < node.end; ++k) consider(order_[k], q, best);
            return;
        }
        const double diff = q[node.axis] - node.split;
        const auto near = diff < 0 ? node.left : node.right;
        const auto far = diff < 0 ? node.right : node.left;
        search(near, q, best);
        // `<=` so that equal-distance points with smaller keys are still visited.
        if (diff * diff <= best.distance_sq) search(far, q, best);
    }

    std::vector<double> coords_;
    std::size_t dim_ = 0;
    std::vector<std::uint64_t> keys_;
    std::vector<std::size_t> order_;
    std::vector<Node> nodes_;
};

}  // namespace hoi
