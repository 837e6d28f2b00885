#pragma once

#include "hoi/body/model.hpp"
#include "hoi/camera.hpp"
#include "hoi/optim/adam.hpp"

#include <cmath>
#include <string>
#include <utility>
#include <vector>

namespace hoi {

/// Confidence-weighted sum of squared pixel residuals between projected
/// model joints and detected keypoints.
inline double keypoint_energy(const Points3& joints, const Keypoints2D& keypoints, const Camera& camera) {
    keypoints.validate();
    require(joints.size() == keypoints.size(), "keypoint count does not match the model's joint count");
    double e = 0.0;
    for (std::size_t j = 0; j < joints.size(); ++j)
        e += keypoints.confidence[j] * (camera.project(joints[j]) - keypoints.points[j]).squaredNorm();
    return e;
}

inline double keypoint_energy(const BodyParams& params, const BodyModel& model, const Keypoints2D& keypoints,
                              const Camera& camera) {
    return keypoint_energy(model.joints(params), keypoints, camera);
}

/// Gradient of keypoint_energy with respect to the flattened body parameters.
inline BodyParamVector keypoint_energy_gradient(const BodyParams& params, const BodyModel& model,
                                                const Keypoints2D& keypoints, const Camera& camera) {
    const Points3 joints = model.joints(params);
    require(joints.size() == keypoints.size(), "keypoint count does not match the model's joint count");
    const JointJacobian jac = model.joint_jacobian(params);
    BodyParamVector g = BodyParamVector::Zero();
    for (std::size_t j = 0; j < joints.size(); ++j) {
        const Vec2 r = camera.project(joints[j]) - keypoints.points[j];
        const Vec3 dj = 2.0 * keypoints.confidence[j] * camera.project_jacobian(joints[j]).transpose() * r;
        g += jac.middleRows<3>(3 * static_cast<Eigen::Index>(j)).transpose() * dj;
    }
    return g;
}

struct RefineConfig {
    int iterations = 200;
    double learning_rate = 1e-2;
    double pose_prior_weight = 1e-3;
    double shape_prior_weight = 1e-3;
    int max_step_halvings = 10;
};

/// Divergence during refinement; carries the last finite state.
class RefineFailure : public Error {
public:
    RefineFailure(const std::string& message, BodyParams last_valid)
        : Error(ErrorKind::OptimizationFailure, message), last_valid(std::move(last_valid)) {}
    BodyParams last_valid;
};

struct RefineResult {
    BodyParams params;
    std::vector<double> energy_trace;  // accepted energies, first entry is the start
};

/// Keypoint fit with quadratic pulls toward the initialization. Each ADAM
/// step is backtracked (halved) until the objective does not increase; if no
/// halving helps the iterate stays put, so the trace never increases.
inline RefineResult refine_body(const BodyParams& init, const BodyModel& model, const Keypoints2D& keypoints,
                                const Camera& camera, const RefineConfig& config = {}) {
    init.validate();
    const BodyParamVector x0 = init.flatten();
    auto objective = [&](const BodyParamVector& x, BodyParamVector* grad) {
        const BodyParams p = BodyParams::unflatten(x);
        const BodyParamVector d = x - x0;
        double e = keypoint_energy(p, model, keypoints, camera);
        e += config.shape_prior_weight * d.head<kShapeDims>().squaredNorm();
        e += config.pose_prior_weight * d.segment<kPoseDims>(kShapeDims).squaredNorm();
        if (grad) {
            *grad = keypoint_energy_gradient(p, model, keypoints, camera);
            grad->head<kShapeDims>() += 2.0 * config.shape_prior_weight * d.head<kShapeDims>();
            grad->segment<kPoseDims>(kShapeDims) += 2.0 * config.pose_prior_weight * d.segment<kPoseDims>(kShapeDims);
        }
        return e;
    };
    BodyParamVector x = x0, grad;
    double e = objective(x, &grad);
    RefineResult result{init, {e}};
    Adam adam(kBodyParamDims, {config.learning_rate});
    for (int it = 0; it < config.iterations; ++it) {
        BodyParamVector step = adam.step(grad);
        for (int halving = 0; halving <= config.max_step_halvings; ++halving, step *= 0.5) {
            BodyParamVector cand_grad;
            const double ce = objective(x + step, &cand_grad);
            if (!std::isfinite(ce))
                throw RefineFailure("body refinement diverged at iteration " + std::to_string(it),
                                    BodyParams::unflatten(x));
            if (ce <= e) {
                x += step;
                e = ce;
                grad = cand_grad;
                break;
            }
        }
        result.energy_trace.push_back(e);
    }
    result.params = BodyParams::unflatten(x);
    return result;
}

}  // namespace hoi
