#pragma once

#include "hoi/geometry/transform.hpp"

#include <Eigen/SVD>

#include <cmath>

namespace hoi {

/// Least-squares similarity transform mapping `src` onto `dst` (Umeyama).
inline RigidSimTransform procrustes_align(const Points3& src, const Points3& dst) {
    require(src.size() == dst.size(), "procrustes needs equal-size point sets");
    require(src.size() >= 3, "procrustes needs at least three correspondences");
    const double n = static_cast<double>(src.size());

    Vec3 mu_s = Vec3::Zero(), mu_d = Vec3::Zero();
    for (std::size_t i = 0; i < src.size(); ++i) {
        mu_s += src[i];
        mu_d += dst[i];
    }
    mu_s /= n;
    mu_d /= n;

    Mat3 cov = Mat3::Zero();
    Mat3 src_scatter = Mat3::Zero();
    double var_s = 0.0;
    for (std::size_t i = 0; i < src.size(); ++i) {
        const Vec3 a = src[i] - mu_s, b = dst[i] - mu_d;
        cov += b * a.transpose();
        src_scatter += a * a.transpose();
        var_s += a.squaredNorm();
    }
    cov /= n;
    var_s /= n;

    const Eigen::JacobiSVD<Mat3> scatter_svd(src_scatter);
    const auto sv = scatter_svd.singularValues();
    if (!(sv(0) > 0.0) || sv(1) <= 1e-12 * sv(0))
        fail(ErrorKind::DegenerateConfiguration, "source points are collinear or coincident");

    const Eigen::JacobiSVD<Mat3> svd(cov, Eigen::ComputeFullU | Eigen::ComputeFullV);
    Mat3 s = Mat3::Identity();
    if (svd.matrixU().determinant() * svd.matrixV().determinant() < 0) s(2, 2) = -1;
    const Mat3 r = svd.matrixU() * s * svd.matrixV().transpose();
    const double scale = (svd.singularValues().asDiagonal() * s).trace() / var_s;
    if (!(scale > 0.0) || !std::isfinite(scale))
        fail(ErrorKind::DegenerateConfiguration, "target points are degenerate");

    RigidSimTransform t;
    t.scale = scale;
    t.rotation = axis_angle_from_rotation(r);
    t.translation = mu_d - scale * r * mu_s;
    return t;
}

inline double rmse(const Points3& a, const Points3& b) {
    require(a.size() == b.size() && !a.empty(), "rmse needs equal non-empty sets");
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]).squaredNorm();
    return std::sqrt(s / static_cast<double>(a.size()));
}

}  // namespace hoi
