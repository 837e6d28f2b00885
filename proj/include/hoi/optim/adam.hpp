#pragma once

#include "hoi/common.hpp"

#include <Eigen/Core>

#include <cmath>

namespace hoi {

struct AdamConfig {
    double learning_rate = 1e-3;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double epsilon = 1e-8;
};

/// Plain ADAM with bias correction over a flat parameter vector.
class Adam {
public:
    Adam(Eigen::Index size, AdamConfig config) : config_(config), m_(Eigen::VectorXd::Zero(size)), v_(m_) {
        require(config.learning_rate > 0.0, "learning rate must be positive");
    }

    /// Returns the step to add to the parameters.
    Eigen::VectorXd step(const Eigen::VectorXd& gradient) {
        require(gradient.size() == m_.size(), "gradient size mismatch");
        ++t_;
        m_ = config_.beta1 * m_ + (1.0 - config_.beta1) * gradient;
        v_ = config_.beta2 * v_ + (1.0 - config_.beta2) * gradient.cwiseAbs2();
        const double c1 = 1.0 - std::pow(config_.beta1, t_);
        const double c2 = 1.0 - std::pow(config_.beta2, t_);
        return -config_.learning_rate * (m_ / c1).array() / ((v_ / c2).array().sqrt() + config_.epsilon);
    }

    double learning_rate() const { return config_.learning_rate; }
    void set_learning_rate(double lr) { config_.learning_rate = lr; }
    int iterations() const { return t_; }

private:
    AdamConfig config_;
    Eigen::VectorXd m_, v_;
    int t_ = 0;
};

}  // namespace hoi
