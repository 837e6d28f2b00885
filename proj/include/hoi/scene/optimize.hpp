#pragma once

#include "hoi/optim/adam.hpp"
#include "hoi/scene/losses.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <string>
#include <vector>

namespace hoi {

struct OptimizeConfig {
    int steps = 500;
    double learning_rate = 2e-3;
    LossWeights weights;
    LossConfig loss;
    double min_scale = 1e-3;
    std::function<void(int step, const SceneState&, const LossBreakdown&)> on_step;  // optional observer
};

struct OptimizeResult {
    SceneState state;
    std::vector<LossBreakdown> trace;  // initial state, then one entry per step
    std::vector<std::string> warnings;
    std::string diagnostic;  // set when the run was aborted
    bool aborted = false;
};

namespace detail {

struct SceneParams {
    std::vector<RigidSimTransform> objects;
    std::vector<double> humans;

    static SceneParams of(const SceneState& s) {
        SceneParams p;
        for (const auto& o : s.objects) p.objects.push_back(o.transform);
        for (const auto& h : s.humans) p.humans.push_back(h.scale);
        return p;
    }
    void assign_to(SceneState& s) const {
        for (std::size_t o = 0; o < objects.size(); ++o) s.objects[o].transform = objects[o];
        for (std::size_t h = 0; h < humans.size(); ++h) s.humans[h].scale = humans[h];
    }
};

}  // namespace detail

/// ADAM over every object's scale, rotation increment and translation plus
/// each human's scale. Object translations are stepped in the coordinates
/// t / (s * r0), r0 being the starting |t| / s: a scale step then slides the
/// object along its camera rays, leaving its projection unchanged, and a
/// translation step is a fixed fraction of the object's distance. Gradients
/// are mapped to these coordinates before the step.
inline OptimizeResult optimize_scene(SceneState state, const SizePriors& priors, const OptimizeConfig& config = {}) {
    require(config.steps >= 0, "step count must be non-negative");
    require(config.learning_rate > 0.0, "learning rate must be positive");
    state.validate();
    const std::size_t n_obj = state.objects.size(), n_hum = state.humans.size();
    OptimizeResult result;
    Adam adam(static_cast<Eigen::Index>(7 * n_obj + n_hum), {config.learning_rate});
    detail::SceneParams best = detail::SceneParams::of(state);
    double best_total = std::numeric_limits<double>::infinity();
    std::vector<double> reach;
    for (const auto& o : state.objects) reach.push_back(std::max(o.transform.translation.norm() / o.transform.scale, 1e-6));

    for (int step = 0;; ++step) {
        SceneGradient g;
        LossBreakdown b;
        try {
            const SceneContext ctx = freeze_context(state, config.loss);
            if (step == 0) result.warnings = ctx.warnings;
            b = total_loss(state, ctx, priors, config.weights, config.loss, &g);
        } catch (const Error& e) {
            if (e.kind() != ErrorKind::BehindCamera) throw;
            b.total = std::numeric_limits<double>::quiet_NaN();
            result.diagnostic = e.what();
        }
        const Eigen::VectorXd flat = std::isfinite(b.total) ? g.flatten() : Eigen::VectorXd();
        if (!b.finite() || !flat.allFinite()) {
            result.aborted = true;
            result.diagnostic = "non-finite loss at step " + std::to_string(step) +
                                (result.diagnostic.empty() ? "" : ": " + result.diagnostic) +
                                "; returning the best state seen";
            best.assign_to(state);
            break;
        }
        result.trace.push_back(b);
        if (config.on_step) config.on_step(step, state, b);
        if (b.total < best_total) {
            best_total = b.total;
            best = detail::SceneParams::of(state);
        }
        if (step == config.steps) break;

        Eigen::VectorXd chart = flat;
        for (std::size_t o = 0; o < n_obj; ++o) {
            const auto& t = state.objects[o].transform;
            const Vec3 tau = t.translation / t.scale;
            const auto i = static_cast<Eigen::Index>(7 * o);
            chart[i] += tau.dot(flat.segment<3>(i + 4));
            chart.segment<3>(i + 4) = reach[o] * t.scale * flat.segment<3>(i + 4);
        }
        const Eigen::VectorXd d = adam.step(chart);
        for (std::size_t o = 0; o < n_obj; ++o) {
            auto& t = state.objects[o].transform;
            const auto i = static_cast<Eigen::Index>(7 * o);
            const Vec3 tau = t.translation / t.scale + reach[o] * d.segment<3>(i + 4);
            t.scale = std::max(t.scale + d[i], config.min_scale);
            t.rotation = axis_angle_from_rotation(rotation_from_axis_angle(d.segment<3>(i + 1)) * t.rotation_matrix());
            t.translation = t.scale * tau;
        }
        for (std::size_t h = 0; h < n_hum; ++h)
            state.humans[h].scale = std::max(state.humans[h].scale + d[static_cast<Eigen::Index>(7 * n_obj + h)], config.min_scale);
    }
    result.state = std::move(state);
    return result;
}

}  // namespace hoi
