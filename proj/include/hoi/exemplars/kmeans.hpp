#pragma once

#include "hoi/common.hpp"

#include <Eigen/Core>

#include <cstdint>
#include <limits>
#include <random>
#include <vector>

namespace hoi {

struct KMeansConfig {
    int max_iterations = 300;
    double tolerance = 1e-6;  // stop when no center moves farther than this
};

struct KMeansResult {
    std::vector<int> assignment;
    std::vector<Eigen::VectorXd> centers;
    std::vector<double> cost_trace;  // sum of squared distances after each assignment step
    int iterations = 0;
};

namespace detail {

/// Uniform double in [0, 1) from the top 53 bits, identical on every
/// standard library (std::uniform_real_distribution is not).
inline double uniform01(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

inline std::pair<int, double> nearest_center(const Eigen::VectorXd& x, const std::vector<Eigen::VectorXd>& centers) {
    int best = 0;
    double best_d = std::numeric_limits<double>::infinity();
    for (std::size_t c = 0; c < centers.size(); ++c) {
        const double d = (x - centers[c]).squaredNorm();
        if (d < best_d) {
            best_d = d;
            best = static_cast<int>(c);
        }
    }
    return {best, best_d};
}

}  // namespace detail

/// k-means++ seeding (D^2 sampling) followed by Lloyd iterations. Ties in
/// assignment go to the lowest center index; an empty cluster keeps its
/// previous center.
inline KMeansResult kmeans_pp(const std::vector<Eigen::VectorXd>& points, int k, std::uint64_t seed,
                              const KMeansConfig& config = {}) {
    require(k >= 1, "k must be at least 1");
    require(points.size() >= static_cast<std::size_t>(k), "k-means needs at least k points");
    const auto dim = points[0].size();
    for (const auto& p : points) {
        require(p.size() == dim, "k-means points differ in dimension");
        require(p.allFinite(), "k-means points must be finite");
    }
    const std::size_t n = points.size();
    std::mt19937_64 rng(seed);

    KMeansResult r;
    std::vector<bool> chosen(n, false);
    std::size_t first = static_cast<std::size_t>(detail::uniform01(rng) * static_cast<double>(n));
    first = std::min(first, n - 1);
    r.centers.push_back(points[first]);
    chosen[first] = true;
    std::vector<double> d2(n);
    for (std::size_t i = 0; i < n; ++i) d2[i] = (points[i] - points[first]).squaredNorm();
    while (r.centers.size() < static_cast<std::size_t>(k)) {
        double total = 0.0;
        for (std::size_t i = 0; i < n; ++i) total += chosen[i] ? 0.0 : d2[i];
        std::size_t pick = n;
        if (total > 0.0) {
            const double u = detail::uniform01(rng) * total;
            double acc = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                if (chosen[i] || d2[i] == 0.0) continue;
                acc += d2[i];
                pick = i;
                if (acc > u) break;
            }
        } else {
            // all remaining points coincide with a center
            for (std::size_t i = 0; i < n && pick == n; ++i)
                if (!chosen[i]) pick = i;
        }
        chosen[pick] = true;
        r.centers.push_back(points[pick]);
        for (std::size_t i = 0; i < n; ++i) d2[i] = std::min(d2[i], (points[i] - points[pick]).squaredNorm());
    }

    r.assignment.assign(n, 0);
    for (r.iterations = 0; r.iterations < config.max_iterations; ++r.iterations) {
        double cost = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const auto [c, d] = detail::nearest_center(points[i], r.centers);
            r.assignment[i] = c;
            cost += d;
        }
        r.cost_trace.push_back(cost);
        std::vector<Eigen::VectorXd> sums(k, Eigen::VectorXd::Zero(dim));
        std::vector<int> counts(k, 0);
        for (std::size_t i = 0; i < n; ++i) {
            sums[r.assignment[i]] += points[i];
            ++counts[r.assignment[i]];
        }
        double moved = 0.0;
        for (int c = 0; c < k; ++c) {
            if (counts[c] == 0) continue;
            const Eigen::VectorXd updated = sums[c] / counts[c];
            moved = std::max(moved, (updated - r.centers[c]).norm());
            r.centers[c] = updated;
        }
        if (moved < config.tolerance) {
            ++r.iterations;
            break;
        }
    }
    // final assignment against the final centers
    double cost = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const auto [c, d] = detail::nearest_center(points[i], r.centers);
        r.assignment[i] = c;
        cost += d;
    }
    r.cost_trace.push_back(cost);
    return r;
}

}  // namespace hoi
