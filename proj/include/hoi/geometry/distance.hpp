#pragma once

#include "hoi/geometry/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <vector>

namespace hoi {

/// Closest point on triangle (a, b, c) to p (Ericson, Real-Time Collision
/// Detection, 5.1.5).
inline Vec3 closest_point_on_triangle(const Vec3& p, const Vec3& a, const Vec3& b, const Vec3& c) {
    const Vec3 ab = b - a, ac = c - a, ap = p - a;
    const double d1 = ab.dot(ap), d2 = ac.dot(ap);
    if (d1 <= 0 && d2 <= 0) return a;

    const Vec3 bp = p - b;
    const double d3 = ab.dot(bp), d4 = ac.dot(bp);
    if (d3 >= 0 && d4 <= d3) return b;

    const double vc = d1 * d4 - d3 * d2;
    if (vc <= 0 && d1 >= 0 && d3 <= 0) return a + (d1 / (d1 - d3)) * ab;

    const Vec3 cp = p - c;
    const double d5 = ab.dot(cp), d6 = ac.dot(cp);
    if (d6 >= 0 && d5 <= d6) return c;

    const double vb = d5 * d2 - d1 * d6;
    if (vb <= 0 && d2 >= 0 && d6 <= 0) return a + (d2 / (d2 - d6)) * ac;

    const double va = d3 * d6 - d5 * d4;
    if (va <= 0 && (d4 - d3) >= 0 && (d5 - d6) >= 0)
        return b + ((d4 - d3) / ((d4 - d3) + (d5 - d6))) * (c - b);

    const double denom = 1.0 / (va + vb + vc);
    return a + ab * (vb * denom) + ac * (vc * denom);
}

/// Signed solid angle subtended by triangle (a, b, c) at p
/// (Van Oosterom and Strackee).
inline double triangle_solid_angle(const Vec3& p, const Vec3& a, const Vec3& b, const Vec3& c) {
    const Vec3 ra = a - p, rb = b - p, rc = c - p;
    const double la = ra.norm(), lb = rb.norm(), lc = rc.norm();
    const double numer = ra.dot(rb.cross(rc));
    const double denom = la * lb * lc + ra.dot(rb) * lc + rb.dot(rc) * la + rc.dot(ra) * lb;
    return 2.0 * std::atan2(numer, denom);
}

/// Generalized winding number of a closed (or nearly closed) surface at p.
inline double winding_number(const TriangleMesh& mesh, const Vec3& p) {
    double total = 0.0;
    for (const auto& f : mesh.faces)
        total += triangle_solid_angle(p, mesh.vertices[f[0]], mesh.vertices[f[1]], mesh.vertices[f[2]]);
    return total / (4.0 * std::numbers::pi);
}

inline bool point_in_mesh(const TriangleMesh& mesh, const Vec3& p) { return winding_number(mesh, p) > 0.5; }

/// Axis-aligned bounding-volume hierarchy over triangles for exact
/// unsigned point-to-surface distance queries.
class TriangleBvh {
public:
    explicit TriangleBvh(const TriangleMesh& mesh) : mesh_(&mesh) {
        const std::size_t n = mesh.faces.size();
        order_.resize(n);
        std::iota(order_.begin(), order_.end(), 0);
        centroids_.reserve(n);
        boxes_.reserve(n);
        for (const auto& f : mesh.faces) {
            BoundingBox b;
            for (auto v : f) b.extend(mesh.vertices[v]);
            boxes_.push_back(b);
            centroids_.push_back(b.center());
        }
        if (n > 0) build(0, n);
    }

    struct Hit {
        double distance = std::numeric_limits<double>::infinity();
        std::size_t face = 0;
        Vec3 point = Vec3::Zero();
    };

    Hit closest(const Vec3& p) const {
        Hit best;
        if (!nodes_.empty()) search(0, p, best);
        return best;
    }

private:
    static constexpr std::size_t kLeafSize = 4;

    struct Node {
        BoundingBox box;
        std::size_t begin, end;
        std::int64_t left = -1, right = -1;
    };

    static double box_distance_sq(const BoundingBox& b, const Vec3& p) {
        const Vec3 d = (b.min - p).cwiseMax(Vec3::Zero()).cwiseMax(p - b.max);
        return d.squaredNorm();
    }

    std::int64_t build(std::size_t begin, std::size_t end) {
        const auto id = static_cast<std::int64_t>(nodes_.size());
        Node node{BoundingBox{}, begin, end};
        for (std::size_t k = begin; k < end; ++k) {
            node.box.extend(boxes_[order_[k]].min);
            node.box.extend(boxes_[order_[k]].max);
        }
        nodes_.push_back(node);
        if (end - begin <= kLeafSize) return id;
        BoundingBox cb;
        for (std::size_t k = begin; k < end; ++k) cb.extend(centroids_[order_[k]]);
        int axis = 0;
        cb.extent().maxCoeff(&axis);
        const std::size_t mid = begin + (end - begin) / 2;
        std::nth_element(order_.begin() + begin, order_.begin() + mid, order_.begin() + end,
                         [&](std::size_t a, std::size_t b) { return centroids_[a][axis] < centroids_[b][axis]; });
        const auto l = build(begin, mid);
        const auto r = build(mid, end);
        nodes_[id].left = l;
        nodes_[id].right = r;
        return id;
    }

    void search(std::int64_t id, const Vec3& p, Hit& best) const {
        const Node& node = nodes_[id];
        if (box_distance_sq(node.box, p) >= best.distance * best.distance) return;
        if (node.left < 0) {
            for (std::size_t k = node.begin; k < node.end; ++k) {
                const auto fi = order_[k];
                const auto& f = mesh_->faces[fi];
                const Vec3 q = closest_point_on_triangle(p, mesh_->vertices[f[0]], mesh_->vertices[f[1]],
                                                         mesh_->vertices[f[2]]);
                const double d = (q - p).norm();
                if (d < best.distance) best = {d, fi, q};
            }
            return;
        }
        const double dl = box_distance_sq(nodes_[node.left].box, p);
        const double dr = box_distance_sq(nodes_[node.right].box, p);
        if (dl <= dr) {
            search(node.left, p, best);
            search(node.right, p, best);
        } else {
            search(node.right, p, best);
            search(node.left, p, best);
        }
    }

    const TriangleMesh* mesh_;
    std::vector<std::size_t> order_;
    std::vector<Vec3> centroids_;
    std::vector<BoundingBox> boxes_;
    std::vector<Node> nodes_;
};

inline double unsigned_distance_brute_force(const TriangleMesh& mesh, const Vec3& p) {
    double best = std::numeric_limits<double>::infinity();
    for (const auto& f : mesh.faces) {
        const Vec3 q = closest_point_on_triangle(p, mesh.vertices[f[0]], mesh.vertices[f[1]], mesh.vertices[f[2]]);
        best = std::min(best, (q - p).norm());
    }
    return best;
}

}  // namespace hoi
